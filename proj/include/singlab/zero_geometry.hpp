#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "singlab/fit.hpp"
#include "singlab/polynomial.hpp"
#include "singlab/region.hpp"

namespace singlab {

// Numerical sample of the zero set Z_f: descent-accepted points with
// their residuals |f(x)| and descent trace lengths.
struct ZeroSample {
    int num_vars = 0;
    std::vector<std::vector<double>> points;
    std::vector<double> residuals;
    std::vector<int> steps;

    size_t size() const { return points.size(); }
};

// Damped Newton on f from random starts in U; a start is accepted when
// the final residual is <= residual_tol and the point stays in U.
// Throws EmptyAfterBudget when fewer than count/10 points are accepted.
ZeroSample sample_zero_set(const SparsePolynomial& f, const Region& U,
                           int count, double residual_tol, std::uint64_t seed);

struct DistanceBracket {
    double lower = 0.0;  // heuristic: upper / 2, not rigorous
    double upper = 0.0;
};

// Distance from x to Z_f estimated against the sample; the nearest
// sample point is polished by sliding along the zero set toward x.
DistanceBracket distance_to_zero(const SparsePolynomial& f,
                                 std::span<const double> x,
                                 const ZeroSample& sample);

enum class DimensionMethod { BoxCount, NeighborhoodVolume };

struct DimensionEstimate {
    ExponentFit fit;
    double dim_value = 0.0;
    DimensionMethod method = DimensionMethod::BoxCount;
};

// Box-counting dimension of the sampled set over a dyadic epsilon range
// (epsilons must be powers of two spanning >= 4 levels; >= 1000 points).
DimensionEstimate box_dimension(const ZeroSample& sample,
                                const std::vector<double>& eps_range);

// Monte Carlo volume |{x in U : dist(x, Z_f) < eps}| per eps; the fitted
// slope is the volume exponent n - l, dim_value = n - slope.
DimensionEstimate neighborhood_volume_exponent(const SparsePolynomial& f,
                                               const Region& U,
                                               const ZeroSample& sample,
                                               const std::vector<double>& eps_range,
                                               std::int64_t samples,
                                               std::uint64_t seed);

// Sign changes of d f / d x1 along the first axis at a fixed slice
// x' of the remaining coordinates: dense scan plus bisection refinement.
std::vector<double> monotonicity_breakpoints(const SparsePolynomial& f,
                                             std::span<const double> xprime,
                                             double a, double b);

struct MonotonicityStats {
    int max_changes = 0;
    int degenerate_slices = 0;  // skipped slices with f(., x') identically 0
};

MonotonicityStats max_monotonicity_changes(const SparsePolynomial& f,
                                           const Region& U, int slice_count,
                                           std::uint64_t seed);

// Projection onto the last (n-1) coordinates, for dim-monotonicity checks.
ZeroSample project_drop_first(const ZeroSample& sample);

}  // namespace singlab
