#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "singlab/fit.hpp"
#include "singlab/polynomial.hpp"
#include "singlab/region.hpp"

namespace singlab {

struct ShellBudget {
    std::int64_t samples_per_shell = 200000;
    int j_max = 24;
};

// One dyadic level-set shell E_j = { 2^{-j-1} < |f| <= 2^{-j} }.
struct Shell {
    int level = 0;
    std::int64_t hits = 0;
    double measure = 0.0;
    double measure_se = 0.0;
    double contribution = 0.0;  // integral of the integrand over E_j (0 for measure-only runs)
    double contribution_se = 0.0;
};

struct ShellProfile {
    std::vector<Shell> shells;  // levels 0..j_max, strictly increasing
    int j_max = 0;
    double exponent_p = 0.0;
    double bulk = 0.0;     // integral over { |f| > 1 }, where the integrand is tame
    double bulk_se = 0.0;
    std::int64_t deep_hits = 0;  // |f| below the 2^{-j_max-1} threshold
    std::int64_t sink_hits = 0;  // |f| < 1e-300, excluded from all fits
    std::int64_t total_samples = 0;
};

enum class VerdictKind { Convergent, Divergent, Inconclusive };

std::string to_string(VerdictKind kind);

struct IntegralVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double value = 0.0;       // convergent only: sum of shells + bulk + tail
    double error_bar = 0.0;
    double tail_growth_rate = 0.0;  // fitted log2 slope of the shell contributions
    std::string reason;
    ExponentFit fit;
    ShellProfile profile;
};

// Monte Carlo measure of each shell E_j inside U: one uniform point
// stream, binned by floor(-log2 |f(x)|).
ShellProfile shell_decompose(const SparsePolynomial& f, const Region& U,
                             int j_max, std::int64_t samples_per_shell,
                             std::uint64_t seed, int threads = 0);

// Shell-wise integral of |grad f / f|^p over U with tail classification.
IntegralVerdict integrate_grad_log(const SparsePolynomial& f, double p,
                                   const Region& U, const ShellBudget& budget,
                                   std::uint64_t seed, int threads = 0);

// Same machinery for | log |f| |^p.
IntegralVerdict integrate_abs_log(const SparsePolynomial& f, double p,
                                  const Region& U, const ShellBudget& budget,
                                  std::uint64_t seed, int threads = 0);

struct CriticalExponentResult {
    double gamma = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool widened = false;  // an inconclusive probe stopped the refinement
    std::vector<std::pair<double, VerdictKind>> probes;
};

// Bisection for the critical integrability exponent of |grad f / f|^p.
// Requires a convergent verdict at p_lo and a divergent one at p_hi.
CriticalExponentResult critical_exponent(const SparsePolynomial& f,
                                         const Region& U, double p_lo,
                                         double p_hi, double tol,
                                         const ShellBudget& budget,
                                         std::uint64_t seed, int threads = 0);

// 1D check of int_0^eps |phi'/phi| for phi(rho) = f(rho omega), by dyadic
// rho-shells integrated with composite Simpson.  Divergence shows up as
// shell contributions approaching a positive constant.
IntegralVerdict radial_blowup_check(const SparsePolynomial& f,
                                    std::span<const double> omega, double eps);

}  // namespace singlab
