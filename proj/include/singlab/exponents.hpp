#pragma once

#include <cstdint>

#include "singlab/fit.hpp"
#include "singlab/polynomial.hpp"
#include "singlab/region.hpp"
#include "singlab/zero_geometry.hpp"

namespace singlab {

struct ExponentBudget {
    int probes_per_level = 60000;     // envelope estimators
    std::int64_t volume_samples = 20000000;  // sublevel-volume stream
    int zero_sample_count = 4000;
};

// Distance exponent alpha in |f(x)| >= c dist(x, Z_f)^alpha: fits the
// lower envelope of log |f| against log dist over dyadic distance bins.
ExponentFit loja_distance_exponent(const SparsePolynomial& f, const Region& U,
                                   const ZeroSample& sample,
                                   int probes_per_level, std::uint64_t seed);

// Gradient exponent beta0 in |grad f| >= c |f|^beta: lower envelope of
// log |grad f| against log |f| near the zero set.  Returns the trivial
// slope 0 immediately when grad f(0) != 0.
ExponentFit loja_gradient_exponent(const SparsePolynomial& f,
                                   const ZeroSample& sample,
                                   int probes_per_level, std::uint64_t seed);

// Singularity exponent alpha0 via sublevel-volume scaling: the slope of
// log |{ |f| <= t }| against log t at dyadic thresholds.
ExponentFit singularity_exponent(const SparsePolynomial& f, const Region& U,
                                 std::int64_t samples, std::uint64_t seed);

struct ExponentReport {
    ExponentFit alpha0;
    ExponentFit beta0;
    ExponentFit alpha_dist;
    double inequality_margin = 0.0;  // alpha0 + beta0 - 1
    bool codim_warning = false;      // zero set looked like codimension < 2
    bool low_confidence = false;
};

ExponentReport exponent_inequality_report(const SparsePolynomial& f,
                                          const Region& U,
                                          const ExponentBudget& budget,
                                          std::uint64_t seed);

}  // namespace singlab
