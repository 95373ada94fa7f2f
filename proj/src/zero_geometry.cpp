#include "singlab/zero_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "singlab/errors.hpp"
#include "singlab/rng.hpp"

namespace singlab {

namespace {

constexpr int kMaxDescentSteps = 200;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Derivatives needed by the descent: gradient and Hessian of f.
struct DescentContext {
    const SparsePolynomial& f;
    std::vector<SparsePolynomial> grads;
    std::vector<SparsePolynomial> hess;  // row-major n x n

    explicit DescentContext(const SparsePolynomial& poly)
        : f(poly), grads(poly.gradient()) {
        const int n = poly.num_vars();
        hess.reserve(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) hess.push_back(grads[i].partial(j));
    }
};

// Solves A d = b in place by Gaussian elimination with partial pivoting.
// Returns false when A is numerically singular.
bool solve_dense(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[pivot * n + col]))
                pivot = r;
        if (std::abs(A[pivot * n + col]) < 1e-300) return false;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(A[col * n + c], A[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double m = A[r * n + col] / A[col * n + col];
            for (int c = col; c < n; ++c) A[r * n + c] -= m * A[col * n + c];
            b[r] -= m * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        for (int c = r + 1; c < n; ++c) b[r] -= A[r * n + c] * b[c];
        b[r] /= A[r * n + r];
    }
    return true;
}

/*
 * Damped Newton for f = 0.  The primary step is the minimal-norm root
 * step -f grad f / |grad f|^2, which is quadratically convergent at
 * regular zeros and moves to the nearest branch of the zero set.  Along
 * flat directions that step crawls (for x1^2 + x2^4 the quartic axis
 * contracts by a near-unit factor once the damping kicks in), so when
 * it stops making real progress the iteration falls back to a
 * Levenberg-damped second-order step on F = f^2, solving
 * (H_F + mu I) d = -grad F with H_F = 2 (g g^T + f H_f).
 * Returns the number of steps, or -1 on a stall.
 */
int descend(const DescentContext& ctx, std::vector<double>& x, double tol) {
    const int n = ctx.f.num_vars();
    std::vector<double> g(n), h(static_cast<size_t>(n) * n);
    std::vector<double> A(static_cast<size_t>(n) * n), rhs(n), trial(n);
    std::vector<double> fallback(n);
    double mu = 1e-4;
    for (int step = 0; step < kMaxDescentSteps; ++step) {
        const double fv = ctx.f.eval(x);
        if (std::abs(fv) <= tol) return step;
        double g2 = 0.0;
        for (int i = 0; i < n; ++i) {
            g[i] = ctx.grads[i].eval(x);
            g2 += g[i] * g[i];
        }
        if (g2 < 1e-280) return -1;  // stationary point off the zero set

        // First-order step with halving, demanding a halved residual.
        bool moved = false;
        bool have_fallback = false;
        double fallback_f = std::abs(fv);
        double lambda = 1.0;
        for (int halving = 0; halving < 8; ++halving) {
            for (int i = 0; i < n; ++i)
                trial[i] = x[i] - lambda * fv * g[i] / g2;
            const double ft = std::abs(ctx.f.eval(trial));
            if (ft <= 0.5 * std::abs(fv)) {
                x = trial;
                moved = true;
                break;
            }
            if (ft < fallback_f) {
                fallback = trial;
                fallback_f = ft;
                have_fallback = true;
            }
            lambda *= 0.5;
        }
        if (moved) continue;

        // Second-order rescue on F = f^2.
        const double F = fv * fv;
        for (int i = 0; i < n * n; ++i) h[i] = ctx.hess[i].eval(x);
        for (int attempt = 0; attempt < 40 && !moved; ++attempt) {
            for (int i = 0; i < n; ++i) {
                rhs[i] = -2.0 * fv * g[i];
                for (int j = 0; j < n; ++j)
                    A[i * n + j] = 2.0 * (g[i] * g[j] + fv * h[i * n + j]) +
                                   (i == j ? mu : 0.0);
            }
            std::vector<double> M = A, d = rhs;
            if (solve_dense(M, d, n)) {
                for (int i = 0; i < n; ++i) trial[i] = x[i] + d[i];
                const double ft = ctx.f.eval(trial);
                if (ft * ft < F) {
                    x = trial;
                    mu = std::max(mu * 0.25, 1e-12);
                    moved = true;
                    break;
                }
            }
            mu *= 8.0;
            if (mu > 1e40) break;
        }
        if (moved) continue;
        if (have_fallback) {
            x = fallback;
            continue;
        }
        return -1;
    }
    return std::abs(ctx.f.eval(x)) <= tol ? kMaxDescentSteps : -1;
}

// Subsampled nearest sample point (index), for distance queries.
size_t nearest_index(std::span<const double> x, const ZeroSample& sample,
                     size_t stride) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sample.points.size(); i += stride) {
        const double d = dist(x, sample.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

size_t distance_stride(const ZeroSample& sample, size_t cap = 8000) {
    return std::max<size_t>(1, sample.points.size() / cap);
}

}  // namespace

ZeroSample sample_zero_set(const SparsePolynomial& f, const Region& U,
                           int count, double residual_tol, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("count must be positive");
    if (U.dim() != f.num_vars())
        throw std::invalid_argument("region dimension does not match polynomial");
    const DescentContext ctx(f);

    ZeroSample sample;
    sample.num_vars = f.num_vars();
    Rng rng(seed);
    std::vector<double> x;
    const long long budget = static_cast<long long>(count) * 10;
    for (long long tries = 0;
         tries < budget && static_cast<int>(sample.size()) < count; ++tries) {
        U.sample(rng, x);
        const int steps = descend(ctx, x, residual_tol);
        if (steps < 0) continue;
        if (!U.contains(x)) continue;
        sample.points.push_back(x);
        sample.residuals.push_back(std::abs(f.eval(x)));
        sample.steps.push_back(steps);
    }
    if (static_cast<int>(sample.size()) < count / 10)
        throw EmptyAfterBudget("accepted " + std::to_string(sample.size()) +
                               " zero-set points out of a target of " +
                               std::to_string(count));
    return sample;
}

DistanceBracket distance_to_zero(const SparsePolynomial& f,
                                 std::span<const double> x,
                                 const ZeroSample& sample) {
    if (sample.points.empty())
        throw std::invalid_argument("distance_to_zero needs a non-empty sample");
    const int n = f.num_vars();
    const DescentContext ctx(f);
    const auto& grads = ctx.grads;
    std::vector<double> z =
        sample.points[nearest_index(x, sample, distance_stride(sample))];
    double best = dist(x, z);

    // Slide z along the zero set toward x: tangential pull, then a Newton
    // correction back to Z_f.  Skipped where the gradient vanishes
    // (e.g. an isolated singular zero, where the sample point suffices).
    std::vector<double> g(n), trial(n);
    for (int iter = 0; iter < 30; ++iter) {
        double g2 = 0.0;
        for (int i = 0; i < n; ++i) {
            g[i] = grads[i].eval(z);
            g2 += g[i] * g[i];
        }
        if (g2 < 1e-16) break;
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += (x[i] - z[i]) * g[i];
        for (int i = 0; i < n; ++i)
            trial[i] = z[i] + 0.5 * ((x[i] - z[i]) - dot * g[i] / g2);
        descend(ctx, trial, 1e-12);
        if (dist(x, trial) < best && std::abs(f.eval(trial)) < 1e-8) {
            z = trial;
            best = dist(x, z);
        } else {
            break;
        }
    }
    return {0.5 * best, best};
}

DimensionEstimate box_dimension(const ZeroSample& sample,
                                const std::vector<double>& eps_range) {
    if (sample.points.size() < 1000)
        throw std::invalid_argument("box_dimension needs >= 1000 sample points");
    if (eps_range.size() < 4)
        throw std::invalid_argument("eps_range must span >= 4 dyadic levels");
    const int n = sample.num_vars;

    std::vector<double> xs, ys;
    for (double eps : eps_range) {
        const double level = -std::log2(eps);
        if (std::abs(level - std::round(level)) > 1e-9)
            throw std::invalid_argument("eps_range entries must be powers of two");
        std::unordered_set<std::uint64_t> boxes;
        for (const auto& p : sample.points) {
            std::uint64_t h = 1469598103934665603ULL;
            for (int i = 0; i < n; ++i) {
                const auto k = static_cast<std::int64_t>(std::floor(p[i] / eps));
                h ^= static_cast<std::uint64_t>(k) + 0x9e3779b97f4a7c15ULL +
                     (h << 6) + (h >> 2);
            }
            boxes.insert(h);
        }
        xs.push_back(level);  // log2(1/eps)
        ys.push_back(std::log2(static_cast<double>(boxes.size())));
    }
    DimensionEstimate est;
    est.method = DimensionMethod::BoxCount;
    est.fit = fit_line(xs, ys);
    est.dim_value = est.fit.slope;
    return est;
}

DimensionEstimate neighborhood_volume_exponent(const SparsePolynomial& f,
                                               const Region& U,
                                               const ZeroSample& sample,
                                               const std::vector<double>& eps_range,
                                               std::int64_t samples,
                                               std::uint64_t seed) {
    if (sample.points.empty())
        throw std::invalid_argument("needs a non-empty zero-set sample");
    if (eps_range.size() < 4)
        throw std::invalid_argument("eps_range must span >= 4 dyadic levels");
    const size_t stride = distance_stride(sample);

    std::vector<double> sorted_eps = eps_range;
    std::sort(sorted_eps.begin(), sorted_eps.end());
    std::vector<std::int64_t> counts(sorted_eps.size(), 0);

    Rng rng(seed);
    std::vector<double> x;
    for (std::int64_t i = 0; i < samples; ++i) {
        U.sample(rng, x);
        const size_t zi = nearest_index(x, sample, stride);
        const double d = dist(x, sample.points[zi]);
        for (size_t k = 0; k < sorted_eps.size(); ++k)
            if (d < sorted_eps[k]) ++counts[k];
    }

    const double vol = U.volume();
    std::vector<double> xs, ys;
    for (size_t k = 0; k < sorted_eps.size(); ++k) {
        if (counts[k] < 16) continue;  // unresolved at this budget
        xs.push_back(std::log2(sorted_eps[k]));
        ys.push_back(std::log2(vol * static_cast<double>(counts[k]) /
                               static_cast<double>(samples)));
    }
    if (xs.size() < 4)
        throw BudgetExhausted("too few resolved epsilon levels for the volume fit");

    DimensionEstimate est;
    est.method = DimensionMethod::NeighborhoodVolume;
    est.fit = fit_line(xs, ys);
    est.dim_value = static_cast<double>(f.num_vars()) - est.fit.slope;
    return est;
}

std::vector<double> monotonicity_breakpoints(const SparsePolynomial& f,
                                             std::span<const double> xprime,
                                             double a, double b) {
    if (!(a < b)) throw std::invalid_argument("interval requires a < b");
    const SparsePolynomial slice = f.restrict_first(xprime);
    if (slice.is_zero())
        throw DegenerateSlice("f(., x') vanishes identically on the slice");
    const SparsePolynomial d1 = slice.partial(0);

    constexpr int kGrid = 1 << 12;
    const double h = (b - a) / kGrid;
    std::vector<double> breakpoints;
    // Compare against the last nonzero value so that roots landing
    // exactly on grid nodes still register as sign changes.
    double prev_t = a;
    double prev_v = d1.eval(std::vector<double>{a});
    for (int k = 1; k <= kGrid; ++k) {
        const double t = a + k * h;
        const double v = d1.eval(std::vector<double>{t});
        if (v == 0.0) continue;
        if (prev_v == 0.0) {
            prev_t = t;
            prev_v = v;
            continue;
        }
        if (std::signbit(prev_v) != std::signbit(v)) {
            // Bisection refinement to 1e-10.
            double lo = prev_t, hi = t, flo = prev_v;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double fm = d1.eval(std::vector<double>{mid});
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            breakpoints.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_v = v;
    }
    return breakpoints;
}

MonotonicityStats max_monotonicity_changes(const SparsePolynomial& f,
                                           const Region& U, int slice_count,
                                           std::uint64_t seed) {
    if (slice_count < 1) throw std::invalid_argument("slice_count must be >= 1");
    if (U.dim() != f.num_vars())
        throw std::invalid_argument("region dimension does not match polynomial");
    Rng rng(seed);
    MonotonicityStats stats;
    const int n = f.num_vars();
    std::vector<double> xprime(n - 1);
    for (int s = 0; s < slice_count; ++s) {
        for (int i = 1; i < n; ++i) xprime[i - 1] = rng.uniform(U.lo[i], U.hi[i]);
        try {
            const auto bps =
                monotonicity_breakpoints(f, xprime, U.lo[0], U.hi[0]);
            stats.max_changes =
                std::max(stats.max_changes, static_cast<int>(bps.size()));
        } catch (const DegenerateSlice&) {
            ++stats.degenerate_slices;
        }
    }
    return stats;
}

ZeroSample project_drop_first(const ZeroSample& sample) {
    ZeroSample out;
    out.num_vars = sample.num_vars - 1;
    out.residuals = sample.residuals;
    out.steps = sample.steps;
    out.points.reserve(sample.points.size());
    for (const auto& p : sample.points)
        out.points.emplace_back(p.begin() + 1, p.end());
    return out;
}

}  // namespace singlab
