#include "singlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singlab {

ExponentFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& weights) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line needs >= 2 matching points");
    const size_t n = x.size();
    std::vector<double> w = weights;
    if (w.empty()) w.assign(n, 1.0);
    if (w.size() != n) throw std::invalid_argument("weight length mismatch");

    double sw = 0, swx = 0, swy = 0;
    for (size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xbar, dy = y[i] - ybar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("degenerate abscissa in fit");

    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.point_count = static_cast<int>(n);
    fit.window_min = *std::min_element(x.begin(), x.end());
    fit.window_max = *std::max_element(x.begin(), x.end());

    double ssr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += w[i] * r * r;
    }
    if (syy <= 1e-30) {
        fit.r_squared = 1.0;  // flat response, perfectly described by slope 0
    } else {
        fit.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
    }
    if (n > 2) {
        const double sigma2 = ssr / (sw * (1.0 - 2.0 / static_cast<double>(n)));
        fit.slope_se = std::sqrt(std::max(sigma2, 0.0) / sxx);
    }
    return fit;
}

}  // namespace singlab
