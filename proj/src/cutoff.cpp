#include "singlab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "singlab/rng.hpp"

namespace singlab {

namespace {

double pow2i(int e) { return std::ldexp(1.0, e); }

// Logistic bridge B(s) = 1 / (1 + exp(1/s - 1/(1-s))) on (0,1) and its
// derivatives, via q = B(1-B):
//   B'   = -h' q
//   B''  = -h'' q - h' q'
//   B''' = -h''' q - 2 h'' q' - h' q''
void bridge(double s, int order, double* out) {
    for (int k = 0; k <= order; ++k) out[k] = 0.0;
    if (s <= 0.0) return;
    if (s >= 1.0) {
        out[0] = 1.0;
        return;
    }
    const double u = 1.0 - s;
    const double h = 1.0 / s - 1.0 / u;
    if (h > 500.0) return;
    if (h < -500.0) {
        out[0] = 1.0;
        return;
    }
    const double B = 1.0 / (1.0 + std::exp(h));
    out[0] = B;
    if (order < 1) return;
    const double h1 = -1.0 / (s * s) - 1.0 / (u * u);
    const double q = B * (1.0 - B);
    out[1] = -h1 * q;
    if (order < 2) return;
    const double h2 = 2.0 / (s * s * s) - 2.0 / (u * u * u);
    const double q1 = out[1] * (1.0 - 2.0 * B);
    out[2] = -h2 * q - h1 * q1;
    if (order < 3) return;
    const double h3 = -6.0 / (s * s * s * s) - 6.0 / (u * u * u * u);
    const double q2 = out[2] * (1.0 - 2.0 * B) - 2.0 * out[1] * out[1];
    out[3] = -h3 * q - 2.0 * h2 * q1 - h1 * q2;
}

}  // namespace

void bump_profile(double t, int order, double* out) {
    if (order < 0 || order > 3)
        throw std::invalid_argument("bump_profile supports orders 0..3");
    if (t <= 1.0) {
        out[0] = 1.0;
        for (int k = 1; k <= order; ++k) out[k] = 0.0;
        return;
    }
    if (t >= 1.5) {
        for (int k = 0; k <= order; ++k) out[k] = 0.0;
        return;
    }
    // b(t) = B(3 - 2t): chain rule contributes (-2)^k.
    bridge(3.0 - 2.0 * t, order, out);
    double factor = 1.0;
    for (int k = 1; k <= order; ++k) {
        factor *= -2.0;
        out[k] *= factor;
    }
}

double DyadicCube::side() const { return pow2i(-level); }

std::vector<double> DyadicCube::center() const {
    std::vector<double> c(index.size());
    const double s = side();
    for (size_t i = 0; i < index.size(); ++i)
        c[i] = (static_cast<double>(index[i]) + 0.5) * s;
    return c;
}

bool DyadicCube::contains(std::span<const double> x) const {
    const double s = side();
    for (size_t i = 0; i < index.size(); ++i) {
        const double lo = static_cast<double>(index[i]) * s;
        if (x[i] < lo || x[i] >= lo + s) return false;
    }
    return true;
}

bool DyadicCube::dilate_contains(std::span<const double> x) const {
    const double s = side();
    for (size_t i = 0; i < index.size(); ++i) {
        const double c = (static_cast<double>(index[i]) + 0.5) * s;
        if (std::abs(x[i] - c) > 0.75 * s) return false;
    }
    return true;
}

std::vector<DyadicCube> dyadic_cover(const std::vector<std::vector<double>>& K,
                                     double eps) {
    if (K.empty()) throw std::invalid_argument("dyadic_cover: empty point set");
    const double level_f = -std::log2(eps);
    const int level = static_cast<int>(std::llround(level_f));
    if (level < 0 || std::abs(level_f - level) > 1e-9)
        throw std::invalid_argument("eps must be a non-positive power of two");

    const size_t n = K.front().size();
    std::set<std::vector<std::int64_t>> indices;
    for (const auto& p : K) {
        if (p.size() != n)
            throw std::invalid_argument("inconsistent point dimensions");
        std::vector<std::int64_t> idx(n);
        for (size_t i = 0; i < n; ++i)
            idx[i] = static_cast<std::int64_t>(std::floor(p[i] / eps));
        indices.insert(std::move(idx));
    }
    std::vector<DyadicCube> cubes;
    cubes.reserve(indices.size());
    for (auto& idx : indices) cubes.push_back({level, idx});
    return cubes;
}

std::vector<DyadicCube> dyadic_cover_fattened(
    const std::vector<std::vector<double>>& K, double eps) {
    if (K.empty()) throw std::invalid_argument("dyadic_cover: empty point set");
    const size_t n = K.front().size();
    const double off = eps / 4.0;
    std::vector<std::vector<double>> fat;
    fat.reserve(K.size() * 3);
    std::vector<int> digits(n, 0);
    for (const auto& p : K) {
        // All offset combinations {-eps/4, 0, +eps/4}^n.
        std::fill(digits.begin(), digits.end(), 0);
        for (;;) {
            std::vector<double> q(n);
            for (size_t i = 0; i < n; ++i)
                q[i] = p[i] + off * static_cast<double>(digits[i] - 1);
            fat.push_back(std::move(q));
            size_t pos = 0;
            while (pos < n && ++digits[pos] == 3) digits[pos++] = 0;
            if (pos == n) break;
        }
    }
    return dyadic_cover(fat, eps / 2.0);
}

double base_bump(const DyadicCube& cube, std::span<const double> x,
                 std::span<const int> alpha) {
    const int n = cube.dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("point dimension mismatch");
    int total = 0;
    for (int a : alpha) total += a;
    if (!alpha.empty() && (static_cast<int>(alpha.size()) != n || total > 3))
        throw std::invalid_argument("multi-index must match dimension, |alpha| <= 3");

    const double s = cube.side();
    const double scale = 2.0 / s;
    const auto c = cube.center();
    double result = 1.0;
    double d[4];
    for (int i = 0; i < n; ++i) {
        const double u = (x[i] - c[i]) * scale;
        const int k = alpha.empty() ? 0 : alpha[i];
        bump_profile(std::abs(u), k, d);
        double g = d[k];
        if (k > 0) {
            const double sgn = u < 0.0 ? -1.0 : 1.0;
            for (int rep = 0; rep < k; ++rep) g *= sgn * scale;
        }
        result *= g;
    }
    return result;
}

Jet Jet::operator*(const Jet& other) const {
    const int n = static_cast<int>(grad.size());
    Jet out(n);
    out.value = value * other.value;
    for (int i = 0; i < n; ++i)
        out.grad[i] = grad[i] * other.value + value * other.grad[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.hess[i * n + j] = hess[i * n + j] * other.value +
                                  grad[i] * other.grad[j] +
                                  grad[j] * other.grad[i] +
                                  value * other.hess[i * n + j];
    return out;
}

Jet Jet::one_minus() const {
    Jet out(static_cast<int>(grad.size()));
    out.value = 1.0 - value;
    for (size_t i = 0; i < grad.size(); ++i) out.grad[i] = -grad[i];
    for (size_t i = 0; i < hess.size(); ++i) out.hess[i] = -hess[i];
    return out;
}

double Jet::deriv(std::span<const int> alpha) const {
    int total = 0;
    for (int a : alpha) total += a;
    if (total == 0) return value;
    const int n = static_cast<int>(grad.size());
    if (total == 1) {
        for (int i = 0; i < n; ++i)
            if (alpha[i] == 1) return grad[i];
    }
    if (total == 2) {
        int first = -1, second = -1;
        for (int i = 0; i < n; ++i) {
            if (alpha[i] == 2) return hess[i * n + i];
            if (alpha[i] == 1) (first < 0 ? first : second) = i;
        }
        if (second >= 0) return hess[first * n + second];
    }
    throw std::invalid_argument("Jet carries derivatives up to order 2");
}

CutoffPartition::CutoffPartition(std::vector<DyadicCube> cubes)
    : cubes_(std::move(cubes)) {
    if (cubes_.empty()) throw std::invalid_argument("empty cube family");
    const int n = cubes_.front().dim();
    for (const auto& q : cubes_)
        if (q.dim() != n) throw std::invalid_argument("mixed cube dimensions");
    // Sort by side descending (coarsest level first), index for ties.
    std::sort(cubes_.begin(), cubes_.end(), [](const auto& a, const auto& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.index < b.index;
    });
    // Disjointness: a finer cube must not sit inside a coarser one.
    for (size_t i = 0; i < cubes_.size(); ++i) {
        for (size_t j = i + 1; j < cubes_.size(); ++j) {
            const auto& coarse = cubes_[i];
            const auto& fine = cubes_[j];
            const int shift = fine.level - coarse.level;
            bool inside = true;
            for (int d = 0; d < n; ++d) {
                const std::int64_t parent =
                    fine.index[d] >= 0 ? (fine.index[d] >> shift)
                                       : -(((-fine.index[d] - 1) >> shift) + 1);
                if (parent != coarse.index[d]) {
                    inside = false;
                    break;
                }
            }
            if (inside && shift >= 0)
                throw std::invalid_argument("overlapping cubes in the family");
        }
    }
}

CutoffPartition build_partition(std::vector<DyadicCube> cubes) {
    return CutoffPartition(std::move(cubes));
}

std::vector<size_t> CutoffPartition::active(std::span<const double> x) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < cubes_.size(); ++i)
        if (cubes_[i].dilate_contains(x)) out.push_back(i);
    return out;
}

double CutoffPartition::psi(size_t i, std::span<const double> x) const {
    return base_bump(cubes_[i], x);
}

double CutoffPartition::phi(size_t i, std::span<const double> x) const {
    if (!cubes_[i].dilate_contains(x)) return 0.0;
    double result = psi(i, x);
    for (size_t j = 0; j < i && result != 0.0; ++j) {
        if (!cubes_[j].dilate_contains(x)) continue;
        result *= 1.0 - psi(j, x);
    }
    return result;
}

double CutoffPartition::chi(std::span<const double> x) const {
    // Telescoping identity: chi = 1 - prod (1 - psi_j).
    double prod = 1.0;
    for (size_t j = 0; j < cubes_.size() && prod != 0.0; ++j) {
        if (!cubes_[j].dilate_contains(x)) continue;
        prod *= 1.0 - psi(j, x);
    }
    return 1.0 - prod;
}

Jet CutoffPartition::psi_jet(size_t i, std::span<const double> x) const {
    const auto& cube = cubes_[i];
    const int n = cube.dim();
    const double s = cube.side();
    const double scale = 2.0 / s;
    const auto c = cube.center();

    // Per-coordinate profile derivatives with the chain factors applied.
    std::vector<std::array<double, 3>> g(n);
    for (int k = 0; k < n; ++k) {
        const double u = (x[k] - c[k]) * scale;
        const double sgn = u < 0.0 ? -1.0 : 1.0;
        double d[3];
        bump_profile(std::abs(u), 2, d);
        g[k] = {d[0], d[1] * sgn * scale, d[2] * scale * scale};
    }
    Jet jet(n);
    double v = 1.0;
    for (int k = 0; k < n; ++k) v *= g[k][0];
    jet.value = v;
    for (int a = 0; a < n; ++a) {
        double gv = g[a][1];
        for (int k = 0; k < n; ++k)
            if (k != a) gv *= g[k][0];
        jet.grad[a] = gv;
        for (int b = 0; b < n; ++b) {
            double hv = (a == b) ? g[a][2] : g[a][1] * g[b][1];
            for (int k = 0; k < n; ++k)
                if (k != a && k != b) hv *= g[k][0];
            jet.hess[a * n + b] = hv;
        }
    }
    return jet;
}

Jet CutoffPartition::phi_jet(size_t i, std::span<const double> x) const {
    const int n = dim();
    if (!cubes_[i].dilate_contains(x)) return Jet(n);
    Jet result = psi_jet(i, x);
    for (size_t j = 0; j < i; ++j) {
        if (!cubes_[j].dilate_contains(x)) continue;
        result = result * psi_jet(j, x).one_minus();
    }
    return result;
}

Jet CutoffPartition::chi_jet(std::span<const double> x) const {
    const int n = dim();
    Jet prod = Jet::constant(n, 1.0);
    for (size_t j = 0; j < cubes_.size(); ++j) {
        if (!cubes_[j].dilate_contains(x)) continue;
        prod = prod * psi_jet(j, x).one_minus();
    }
    return prod.one_minus();
}

DerivativeBoundReport verify_derivative_bound(const CutoffPartition& partition,
                                              std::span<const int> alpha,
                                              int samples_per_cube,
                                              std::uint64_t seed) {
    int total = 0;
    for (int a : alpha) total += a;
    if (total > 2)
        throw std::invalid_argument("verify_derivative_bound supports |alpha| <= 2");

    DerivativeBoundReport report;
    std::vector<double> x(partition.dim());
    for (size_t i = 0; i < partition.cubes().size(); ++i) {
        const auto& cube = partition.cubes()[i];
        const double s = cube.side();
        const auto c = cube.center();
        Rng rng = Rng::substream(seed, i);
        double sup = 0.0;
        for (int k = 0; k < samples_per_cube; ++k) {
            for (int d = 0; d < cube.dim(); ++d)
                x[d] = c[d] + rng.uniform(-0.75 * s, 0.75 * s);
            const double v = std::abs(partition.phi_jet(i, x).deriv(alpha));
            sup = std::max(sup, v);
        }
        report.normalized_sup.push_back(sup * std::pow(s, total));
    }
    const auto [mn, mx] = std::minmax_element(report.normalized_sup.begin(),
                                              report.normalized_sup.end());
    report.max_over_min = (*mn > 0.0) ? *mx / *mn
                                      : std::numeric_limits<double>::infinity();
    return report;
}

FlestResult verify_flest(const std::vector<std::vector<double>>& K,
                         const std::vector<double>& eps_range, double l,
                         double p_prime, double lambda_input,
                         std::int64_t samples, std::uint64_t seed) {
    if (K.empty()) throw std::invalid_argument("empty point set");
    const int n = static_cast<int>(K.front().size());
    if (!(static_cast<double>(n) - l * p_prime > 0.0))
        throw std::invalid_argument("requires n - l p' > 0");
    if (lambda_input < 0.0)
        throw std::invalid_argument("Lambda input must be >= 0");
    if (eps_range.size() < 3)
        throw std::invalid_argument("eps_range must span >= 3 levels");

    FlestResult result;
    std::vector<double> xs, ys;
    std::uint64_t stream = 0;
    for (double eps : eps_range) {
        const auto partition = build_partition(dyadic_cover(K, eps));

        // Bounding box of all dilated supports.
        std::vector<double> lo(n, std::numeric_limits<double>::infinity());
        std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
        for (const auto& cube : partition.cubes()) {
            const double s = cube.side();
            const auto c = cube.center();
            for (int d = 0; d < n; ++d) {
                lo[d] = std::min(lo[d], c[d] - 0.75 * s);
                hi[d] = std::max(hi[d], c[d] + 0.75 * s);
            }
        }
        double vol = 1.0;
        for (int d = 0; d < n; ++d) vol *= hi[d] - lo[d];

        Rng rng = Rng::substream(seed, ++stream);
        std::vector<double> x(n);
        double acc = 0.0;
        for (std::int64_t i = 0; i < samples; ++i) {
            for (int d = 0; d < n; ++d) x[d] = rng.uniform(lo[d], hi[d]);
            const Jet jet = partition.chi_jet(x);
            double g2 = 0.0;
            for (int d = 0; d < n; ++d) g2 += jet.grad[d] * jet.grad[d];
            acc += std::pow(std::sqrt(g2), p_prime);
        }
        const double integral = vol * acc / static_cast<double>(samples);
        const double norm = std::pow(integral, 1.0 / p_prime);
        result.norms.emplace_back(eps, norm);
        if (norm > 0.0) {
            xs.push_back(std::log2(eps));
            ys.push_back(std::log2(norm));
        }
    }
    if (xs.size() < 3)
        throw std::runtime_error("gradient norms vanished on the eps range");
    result.fit = fit_line(xs, ys);
    result.fit.low_confidence = result.fit.r_squared < 0.9;
    result.bound_slope =
        lambda_input > 0.0 ? l - 1.0 : l - 1.0 + 1.0 / p_prime;
    return result;
}

}  // namespace singlab
