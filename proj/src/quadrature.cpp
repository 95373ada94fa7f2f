#include "singlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "singlab/errors.hpp"
#include "singlab/parallel.hpp"

namespace singlab {

namespace {

constexpr double kSinkFloor = 1e-300;
constexpr double kSlopeMargin = 0.15;   // log2 units
constexpr double kSlopeZ = 2.0;         // significance multiplier
constexpr double kFlatSeMax = 0.03;     // slope noise below which "flat" is trusted
constexpr std::int64_t kChunk = 1 << 16;
constexpr std::int64_t kMinShellHits = 64;
constexpr int kMinResolvedShells = 6;
constexpr int kMinFitShells = 5;

struct ChunkStats {
    std::vector<std::int64_t> hits;   // per level 0..j_max
    std::vector<double> gsum;         // integrand sums per level
    std::vector<double> gsum2;
    double bulk = 0.0, bulk2 = 0.0;
    std::int64_t bulk_hits = 0;
    std::int64_t deep = 0, sink = 0;
};

// Integrand evaluated from f and its gradient at a point; returns false
// for points excluded from every bin (underflowed |f|).
class Integrand {
public:
    enum class Kind { MeasureOnly, GradLog, AbsLog };

    Integrand(const SparsePolynomial& f, Kind kind, double p)
        : f_(f), kind_(kind), p_(p) {
        if (kind == Kind::GradLog) grads_ = f.gradient();
    }

    // |f(x)| and the integrand value at x.
    double operator()(std::span<const double> x, double absf) const {
        switch (kind_) {
            case Kind::MeasureOnly:
                return 1.0;
            case Kind::GradLog: {
                double g2 = 0.0;
                for (const auto& d : grads_) {
                    const double gi = d.eval(x);
                    g2 += gi * gi;
                }
                return std::pow(std::sqrt(g2) / absf, p_);
            }
            case Kind::AbsLog:
                return std::pow(std::abs(std::log(absf)), p_);
        }
        return 0.0;
    }

    const SparsePolynomial& f() const { return f_; }

private:
    const SparsePolynomial& f_;
    Kind kind_;
    double p_;
    std::vector<SparsePolynomial> grads_;
};

ShellProfile run_stream(const Integrand& integrand, const Region& U, int j_max,
                        std::int64_t samples_per_shell, std::uint64_t seed,
                        int threads, double p) {
    if (j_max < 4) throw std::invalid_argument("j_max must be >= 4");
    if (samples_per_shell < 1)
        throw std::invalid_argument("samples_per_shell must be positive");
    if (U.dim() != integrand.f().num_vars())
        throw std::invalid_argument("region dimension does not match polynomial");

    const std::int64_t total =
        samples_per_shell * static_cast<std::int64_t>(j_max + 1);
    const std::int64_t n_chunks = (total + kChunk - 1) / kChunk;
    std::vector<ChunkStats> stats(n_chunks);

    parallel_chunks(n_chunks, threads, [&](std::int64_t c) {
        ChunkStats st;
        st.hits.assign(j_max + 1, 0);
        st.gsum.assign(j_max + 1, 0.0);
        st.gsum2.assign(j_max + 1, 0.0);
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(c));
        const std::int64_t lo = c * kChunk;
        const std::int64_t hi = std::min(total, lo + kChunk);
        std::vector<double> x;
        for (std::int64_t i = lo; i < hi; ++i) {
            U.sample(rng, x);
            const double absf = std::abs(integrand.f().eval(x));
            if (absf < kSinkFloor) {
                ++st.sink;
                continue;
            }
            if (absf > 1.0) {
                const double g = integrand(x, absf);
                st.bulk += g;
                st.bulk2 += g * g;
                ++st.bulk_hits;
                continue;
            }
            const int j = static_cast<int>(std::floor(-std::log2(absf)));
            if (j > j_max) {
                ++st.deep;
                continue;
            }
            const int level = std::max(j, 0);
            const double g = integrand(x, absf);
            ++st.hits[level];
            st.gsum[level] += g;
            st.gsum2[level] += g * g;
        }
        stats[c] = std::move(st);
    });

    // Fixed-order reduction over chunks.
    ChunkStats acc;
    acc.hits.assign(j_max + 1, 0);
    acc.gsum.assign(j_max + 1, 0.0);
    acc.gsum2.assign(j_max + 1, 0.0);
    for (const auto& st : stats) {
        for (int j = 0; j <= j_max; ++j) {
            acc.hits[j] += st.hits[j];
            acc.gsum[j] += st.gsum[j];
            acc.gsum2[j] += st.gsum2[j];
        }
        acc.bulk += st.bulk;
        acc.bulk2 += st.bulk2;
        acc.bulk_hits += st.bulk_hits;
        acc.deep += st.deep;
        acc.sink += st.sink;
    }

    std::int64_t nonzero = acc.bulk_hits + acc.deep;
    for (int j = 0; j <= j_max; ++j) nonzero += acc.hits[j];
    if (nonzero == 0)
        throw FunctionVanishes("all sampled |f| below 1e-300 on the region");

    const double vol = U.volume();
    const double N = static_cast<double>(total);

    ShellProfile prof;
    prof.j_max = j_max;
    prof.exponent_p = p;
    prof.total_samples = total;
    prof.deep_hits = acc.deep;
    prof.sink_hits = acc.sink;
    prof.bulk = vol * acc.bulk / N;
    {
        const double mean = acc.bulk / N;
        const double var = std::max(acc.bulk2 / N - mean * mean, 0.0);
        prof.bulk_se = vol * std::sqrt(var / N);
    }
    prof.shells.reserve(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        Shell s;
        s.level = j;
        s.hits = acc.hits[j];
        const double frac = static_cast<double>(acc.hits[j]) / N;
        s.measure = vol * frac;
        s.measure_se = vol * std::sqrt(std::max(frac * (1.0 - frac), 0.0) / N);
        const double mean = acc.gsum[j] / N;
        const double var = std::max(acc.gsum2[j] / N - mean * mean, 0.0);
        s.contribution = vol * mean;
        s.contribution_se = vol * std::sqrt(var / N);
        prof.shells.push_back(s);
    }
    return prof;
}

// Shells trusted for the tail fit: enough hits and a usable error bar.
std::vector<const Shell*> resolved_shells(const ShellProfile& prof) {
    std::vector<const Shell*> out;
    for (const auto& s : prof.shells) {
        if (s.hits >= kMinShellHits && s.contribution > 0.0 &&
            s.contribution_se <= 0.25 * s.contribution)
            out.push_back(&s);
    }
    return out;
}

IntegralVerdict classify(ShellProfile prof) {
    IntegralVerdict verdict;

    const auto resolved = resolved_shells(prof);
    if (static_cast<int>(resolved.size()) < kMinResolvedShells)
        throw BudgetExhausted(
            "only " + std::to_string(resolved.size()) +
            " shells resolved to 25% relative error; increase the budget");

    // Fit log2 c_j against j over the deepest half of the resolved shells.
    const size_t half = std::max<size_t>((resolved.size() + 1) / 2, kMinFitShells);
    const size_t start = resolved.size() > half ? resolved.size() - half : 0;
    std::vector<double> xs, ys, ws;
    for (size_t i = start; i < resolved.size(); ++i) {
        const Shell& s = *resolved[i];
        const double sigma_log =
            s.contribution_se / (s.contribution * std::log(2.0));
        xs.push_back(static_cast<double>(s.level));
        ys.push_back(std::log2(s.contribution));
        ws.push_back(1.0 / (sigma_log * sigma_log + 1e-12));
    }
    verdict.fit = fit_line(xs, ys, ws);
    const double m = verdict.fit.slope;
    const double se = verdict.fit.slope_se;
    verdict.tail_growth_rate = m;

    bool convergent = false;
    if (m <= -kSlopeMargin) {
        convergent = true;
    } else if (m >= kSlopeMargin) {
        verdict.kind = VerdictKind::Divergent;
        verdict.reason = "shell contributions grow geometrically";
    } else if (m + kSlopeZ * se < 0.0) {
        convergent = true;
    } else if (m - kSlopeZ * se > 0.0) {
        verdict.kind = VerdictKind::Divergent;
        verdict.reason = "shell contributions grow (significant at 2 sigma)";
    } else if (se <= kFlatSeMax) {
        // Slope indistinguishable from zero at good resolution: the shell
        // sums keep increasing by a non-vanishing amount per level.
        verdict.kind = VerdictKind::Divergent;
        verdict.reason = "flat shell contributions; partial sums increase";
    } else {
        verdict.kind = VerdictKind::Inconclusive;
        verdict.reason = "shell slope indistinguishable from zero at this budget";
    }

    if (convergent) {
        verdict.kind = VerdictKind::Convergent;
        double sum = prof.bulk, var = prof.bulk_se * prof.bulk_se;
        for (const auto& s : prof.shells) {
            sum += s.contribution;
            var += s.contribution_se * s.contribution_se;
        }
        // Geometric tail beyond j_max from the fitted decay rate.
        const double ratio = std::exp2(m);
        const double c_last =
            std::exp2(verdict.fit.intercept + m * static_cast<double>(prof.j_max));
        const double tail = c_last * ratio / (1.0 - ratio);
        verdict.value = sum + tail;
        verdict.error_bar = std::sqrt(var) + 0.5 * tail;
        verdict.reason = "shell contributions decay geometrically";
    }
    verdict.profile = std::move(prof);
    return verdict;
}

}  // namespace

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Convergent: return "CONVERGENT";
        case VerdictKind::Divergent: return "DIVERGENT";
        case VerdictKind::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

ShellProfile shell_decompose(const SparsePolynomial& f, const Region& U,
                             int j_max, std::int64_t samples_per_shell,
                             std::uint64_t seed, int threads) {
    Integrand integrand(f, Integrand::Kind::MeasureOnly, 0.0);
    return run_stream(integrand, U, j_max, samples_per_shell, seed, threads, 0.0);
}

IntegralVerdict integrate_grad_log(const SparsePolynomial& f, double p,
                                   const Region& U, const ShellBudget& budget,
                                   std::uint64_t seed, int threads) {
    if (p <= 0.0) throw std::invalid_argument("exponent p must be positive");
    Integrand integrand(f, Integrand::Kind::GradLog, p);
    return classify(run_stream(integrand, U, budget.j_max,
                               budget.samples_per_shell, seed, threads, p));
}

IntegralVerdict integrate_abs_log(const SparsePolynomial& f, double p,
                                  const Region& U, const ShellBudget& budget,
                                  std::uint64_t seed, int threads) {
    if (p <= 0.0) throw std::invalid_argument("exponent p must be positive");
    Integrand integrand(f, Integrand::Kind::AbsLog, p);
    return classify(run_stream(integrand, U, budget.j_max,
                               budget.samples_per_shell, seed, threads, p));
}

CriticalExponentResult critical_exponent(const SparsePolynomial& f,
                                         const Region& U, double p_lo,
                                         double p_hi, double tol,
                                         const ShellBudget& budget,
                                         std::uint64_t seed, int threads) {
    if (!(p_lo > 0.0 && p_hi > p_lo))
        throw std::invalid_argument("need 0 < p_lo < p_hi");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

    CriticalExponentResult result;
    std::uint64_t probe_id = 0;
    auto probe = [&](double p, const ShellBudget& b) {
        const auto v = integrate_grad_log(f, p, U, b,
                                          seed + 0x9e37 * (++probe_id), threads);
        result.probes.emplace_back(p, v.kind);
        return v.kind;
    };

    if (probe(p_lo, budget) != VerdictKind::Convergent)
        throw BadBracket("integrate_grad_log at p_lo is not CONVERGENT");
    if (probe(p_hi, budget) != VerdictKind::Divergent)
        throw BadBracket("integrate_grad_log at p_hi is not DIVERGENT");

    double lo = p_lo, hi = p_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        VerdictKind kind = probe(mid, budget);
        if (kind == VerdictKind::Inconclusive) {
            // One re-budget attempt, then stop and report a wider bracket.
            ShellBudget doubled = budget;
            doubled.samples_per_shell *= 2;
            kind = probe(mid, doubled);
            if (kind == VerdictKind::Inconclusive) {
                result.widened = true;
                break;
            }
        }
        if (kind == VerdictKind::Convergent)
            lo = mid;
        else
            hi = mid;
    }
    result.bracket_lo = lo;
    result.bracket_hi = hi;
    result.gamma = 0.5 * (lo + hi);
    return result;
}

IntegralVerdict radial_blowup_check(const SparsePolynomial& f,
                                    std::span<const double> omega, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const UnivariateRestriction phi = restrict_to_ray(f, omega);
    if (!vanishing_order(phi).has_value())
        throw DegenerateRay("restriction of f to the ray vanishes identically");
    const UnivariateRestriction dphi = phi.derivative();

    // Composite Simpson of |phi'/phi| over each rho-shell (eps 2^{-j-1}, eps 2^{-j}].
    constexpr int kLevels = 40;
    constexpr int kPanels = 64;
    ShellProfile prof;
    prof.j_max = kLevels;
    prof.exponent_p = 1.0;
    std::vector<double> xs, ys;
    for (int j = 0; j <= kLevels; ++j) {
        const double b = eps * std::exp2(-static_cast<double>(j));
        const double a = 0.5 * b;
        const double h = (b - a) / kPanels;
        auto g = [&](double rho) {
            const double v = phi.eval(rho);
            const double d = dphi.eval(rho);
            if (std::abs(v) < 1e-300) return 0.0;  // isolated root inside the shell
            return std::abs(d / v);
        };
        double integral = g(a) + g(b);
        for (int k = 1; k < kPanels; ++k)
            integral += g(a + k * h) * (k % 2 ? 4.0 : 2.0);
        integral *= h / 3.0;

        Shell s;
        s.level = j;
        s.measure = b - a;
        s.contribution = integral;
        s.hits = kPanels;
        prof.shells.push_back(s);
        if (j >= kLevels / 2 && integral > 0.0) {
            xs.push_back(static_cast<double>(j));
            ys.push_back(std::log2(integral));
        }
    }

    IntegralVerdict verdict;
    if (xs.size() < 4) {
        verdict.kind = VerdictKind::Inconclusive;
        verdict.reason = "too few usable rho-shells";
        verdict.profile = std::move(prof);
        return verdict;
    }
    verdict.fit = fit_line(xs, ys);
    verdict.tail_growth_rate = verdict.fit.slope;
    const double deepest = prof.shells.back().contribution;
    if (verdict.fit.slope >= -kSlopeMargin && deepest > 1e-8) {
        verdict.kind = VerdictKind::Divergent;
        verdict.reason = "per-shell contribution approaches a positive constant";
    } else if (verdict.fit.slope < -kSlopeMargin) {
        verdict.kind = VerdictKind::Convergent;
        double sum = 0.0;
        for (const auto& s : prof.shells) sum += s.contribution;
        const double ratio = std::exp2(verdict.fit.slope);
        verdict.value = sum + deepest * ratio / (1.0 - ratio);
        verdict.error_bar = 0.05 * verdict.value;
        verdict.reason = "per-shell contribution decays geometrically";
    } else {
        verdict.kind = VerdictKind::Inconclusive;
        verdict.reason = "ambiguous rho-shell decay";
    }
    verdict.profile = std::move(prof);
    return verdict;
}

}  // namespace singlab
