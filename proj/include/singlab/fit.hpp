#pragma once

#include <vector>

namespace singlab {

/*
 * Result of a (weighted) log-log linear regression.  Carrier for every
 * fitted exponent in the project: shell decay rates, Lojasiewicz
 * exponents, box dimensions, neighborhood-volume exponents.
 */
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0;  // abscissa range used
    double window_max = 0.0;
    int point_count = 0;
    bool low_confidence = false;
};

// Weighted least squares of y against x.  Weights may be empty (uniform).
// r_squared is clamped to [0,1]; a flat response (zero total variance)
// reports r_squared = 1 with slope 0.
ExponentFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& weights = {});

}  // namespace singlab
