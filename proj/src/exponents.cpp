#include "singlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "singlab/errors.hpp"
#include "singlab/rng.hpp"

namespace singlab {

namespace {

// Coarse/fine trimming shared by the envelope fits: the two coarsest
// dyadic levels violate "sufficiently small neighborhood", the two
// finest are noise-dominated.
constexpr int kTrim = 2;

ExponentFit envelope_fit(std::map<int, double>& min_log2_by_bin,
                         double abscissa_sign) {
    if (static_cast<int>(min_log2_by_bin.size()) < 2 * kTrim + 8)
        throw BudgetExhausted("too few dyadic bins for an envelope fit");
    std::vector<std::pair<int, double>> bins(min_log2_by_bin.begin(),
                                             min_log2_by_bin.end());
    bins.erase(bins.begin(), bins.begin() + kTrim);
    bins.erase(bins.end() - kTrim, bins.end());

    std::vector<double> xs, ys;
    for (const auto& [b, v] : bins) {
        xs.push_back(abscissa_sign * (static_cast<double>(b) + 0.5));
        ys.push_back(v);
    }
    // A sampled minimum can only overestimate the true envelope, so the
    // residual noise is one-sided.  Refit a few times discarding bins
    // that sit well above the current line; never discard below it.
    ExponentFit fit = fit_line(xs, ys);
    for (int round = 0; round < 3; ++round) {
        double rss = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
            rss += e * e;
        }
        const double cut =
            std::max(0.6, 2.0 * std::sqrt(rss / static_cast<double>(xs.size())));
        std::vector<double> nx, ny;
        for (size_t i = 0; i < xs.size(); ++i)
            if (ys[i] - (fit.intercept + fit.slope * xs[i]) <= cut) {
                nx.push_back(xs[i]);
                ny.push_back(ys[i]);
            }
        if (nx.size() == xs.size() || nx.size() < 8) break;
        xs = std::move(nx);
        ys = std::move(ny);
        fit = fit_line(xs, ys);
    }
    fit.low_confidence = fit.r_squared < 0.9;
    return fit;
}

double grad_norm(const std::vector<SparsePolynomial>& grads,
                 std::span<const double> x) {
    double g2 = 0.0;
    for (const auto& d : grads) {
        const double gi = d.eval(x);
        g2 += gi * gi;
    }
    return std::sqrt(g2);
}

double nearest_distance(std::span<const double> x, const ZeroSample& sample,
                        size_t stride) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sample.points.size(); i += stride) {
        double s = 0.0;
        for (size_t k = 0; k < x.size(); ++k) {
            const double d = x[k] - sample.points[i][k];
            s += d * d;
        }
        best = std::min(best, s);
    }
    return std::sqrt(best);
}

}  // namespace

ExponentFit loja_distance_exponent(const SparsePolynomial& f, const Region& U,
                                   const ZeroSample& sample,
                                   int probes_per_level, std::uint64_t seed) {
    if (sample.points.empty())
        throw std::invalid_argument("needs a non-empty zero-set sample");
    const int n = f.num_vars();
    const size_t stride = std::max<size_t>(1, sample.points.size() / 4000);
    Rng rng(seed);

    // min |f| per dyadic bin of the measured distance to Z_f.
    std::map<int, double> envelope;
    std::vector<double> x(n);
    for (int level = 2; level <= 14; ++level) {
        const double d = std::exp2(-static_cast<double>(level));
        for (int probe = 0; probe < probes_per_level; ++probe) {
            const auto& z = sample.points[rng.next() % sample.points.size()];
            const auto nu = rng.unit_vector(n);
            for (int i = 0; i < n; ++i) x[i] = z[i] + d * nu[i];
            if (!U.contains(x)) continue;
            const double measured = nearest_distance(x, sample, stride);
            if (measured < 1e-14) continue;
            const double absf = std::abs(f.eval(x));
            if (absf < 1e-300) continue;
            const int bin = static_cast<int>(std::floor(-std::log2(measured)));
            const double lf = std::log2(absf);
            auto [it, inserted] = envelope.emplace(bin, lf);
            if (!inserted) it->second = std::min(it->second, lf);
        }
    }
    // abscissa is log2 dist (negative of the bin index).
    return envelope_fit(envelope, -1.0);
}

ExponentFit loja_gradient_exponent(const SparsePolynomial& f,
                                   const ZeroSample& sample,
                                   int probes_per_level, std::uint64_t seed) {
    const int n = f.num_vars();
    const auto grads = f.gradient();
    const std::vector<double> origin(n, 0.0);
    if (grad_norm(grads, origin) > 1e-12 * std::max(f.max_abs_coeff(), 1.0)) {
        // Nonvanishing gradient at the origin: the inequality holds with
        // beta = 0 and the estimator short-circuits.
        ExponentFit trivial;
        trivial.slope = 0.0;
        trivial.r_squared = 1.0;
        trivial.point_count = 0;
        return trivial;
    }
    if (sample.points.empty())
        throw std::invalid_argument("needs a non-empty zero-set sample");

    Rng rng(seed);
    std::map<int, double> envelope;  // min log2|grad f| per log2|f| bin
    std::map<int, std::int64_t> hits;
    std::vector<double> x(n);
    // Radii stop at 2^-8: deeper probes open |f| bins whose binding
    // envelope cannot be populated at these probe counts, which would
    // drag the fitted slope toward the sampling-noise floor.
    for (int level = 2; level <= 8; ++level) {
        const double r = std::exp2(-static_cast<double>(level));
        for (int probe = 0; probe < probes_per_level; ++probe) {
            const auto& z = sample.points[rng.next() % sample.points.size()];
            const auto nu = rng.unit_vector(n);
            for (int i = 0; i < n; ++i) x[i] = z[i] + r * nu[i];
            const double absf = std::abs(f.eval(x));
            if (absf < 1e-300 || absf >= 1.0) continue;
            const double g = grad_norm(grads, x);
            if (g < 1e-300) continue;
            const int bin = static_cast<int>(std::floor(-std::log2(absf)));
            const double lg = std::log2(g);
            auto [it, inserted] = envelope.emplace(bin, lg);
            if (!inserted) it->second = std::min(it->second, lg);
            ++hits[bin];
        }
    }
    // Bins reached only by geometric accident (probes grazing the zero
    // set) hold minima far above the true envelope; keep the bins the
    // probe design actually populates.
    for (auto it = envelope.begin(); it != envelope.end();)
        it = hits[it->first] < 256 ? envelope.erase(it) : std::next(it);
    return envelope_fit(envelope, -1.0);
}

ExponentFit singularity_exponent(const SparsePolynomial& f, const Region& U,
                                 std::int64_t samples, std::uint64_t seed) {
    if (f.is_zero()) throw std::invalid_argument("f must not be identically zero");
    if (U.dim() != f.num_vars())
        throw std::invalid_argument("region dimension does not match polynomial");

    constexpr int kMaxLevel = 24;
    std::vector<std::int64_t> counts(kMaxLevel + 1, 0);  // |f| <= 2^{-j}
    Rng rng(seed);
    std::vector<double> x;
    for (std::int64_t i = 0; i < samples; ++i) {
        U.sample(rng, x);
        const double absf = std::abs(f.eval(x));
        if (absf < 1e-300) continue;
        const double l = -std::log2(absf);
        if (l < 0.0) continue;
        const int top = std::min(kMaxLevel, static_cast<int>(std::floor(l)));
        for (int j = 0; j <= top; ++j) ++counts[j];
    }

    const double vol = U.volume();
    std::vector<double> xs, ys;
    for (int j = 0; j <= kMaxLevel; ++j) {
        if (counts[j] < 64) break;
        xs.push_back(-static_cast<double>(j));  // log2 t
        ys.push_back(std::log2(vol * static_cast<double>(counts[j]) /
                               static_cast<double>(samples)));
    }
    if (static_cast<int>(xs.size()) < 2 * kTrim + 8)
        throw BudgetExhausted("too few resolved sublevel thresholds");
    xs.erase(xs.begin(), xs.begin() + kTrim);
    ys.erase(ys.begin(), ys.begin() + kTrim);
    xs.erase(xs.end() - kTrim, xs.end());
    ys.erase(ys.end() - kTrim, ys.end());

    ExponentFit fit = fit_line(xs, ys);
    fit.low_confidence = fit.r_squared < 0.9;
    return fit;
}

ExponentReport exponent_inequality_report(const SparsePolynomial& f,
                                          const Region& U,
                                          const ExponentBudget& budget,
                                          std::uint64_t seed) {
    const auto sample = sample_zero_set(f, U, budget.zero_sample_count, 1e-10,
                                        seed ^ 0x5a5a5a5aULL);

    ExponentReport report;
    if (sample.points.size() >= 1000) {
        std::vector<double> eps;
        for (int j = 1; j <= 8; ++j) eps.push_back(std::exp2(-j));
        const auto dims = box_dimension(sample, eps);
        report.codim_warning =
            static_cast<double>(f.num_vars()) - dims.dim_value < 1.5;
    }

    report.alpha0 = singularity_exponent(f, U, budget.volume_samples, seed + 1);
    report.beta0 =
        loja_gradient_exponent(f, sample, budget.probes_per_level, seed + 2);
    report.alpha_dist =
        loja_distance_exponent(f, U, sample, budget.probes_per_level, seed + 3);
    report.inequality_margin = report.alpha0.slope + report.beta0.slope - 1.0;
    report.low_confidence = report.alpha0.low_confidence ||
                            report.beta0.low_confidence ||
                            report.alpha_dist.low_confidence;
    return report;
}

}  // namespace singlab
