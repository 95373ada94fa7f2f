#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace singlab {

/*
 * Exact sparse multivariate polynomial: a finite sum of
 * coefficient * x1^a1 * ... * xn^an monomials.
 *
 * Coefficients are doubles; an exact-rational construction path is
 * provided for test fixtures whose coefficients are small ratios.
 * Terms are kept sorted lexicographically by exponent vector and
 * evaluation uses Neumaier-compensated summation in that fixed order,
 * so results do not depend on construction order.
 */
class SparsePolynomial {
public:
    struct Term {
        double coeff;
        std::vector<std::uint32_t> exps;  // length = num_vars
    };

    SparsePolynomial() = default;
    explicit SparsePolynomial(int num_vars);
    SparsePolynomial(int num_vars, std::vector<Term> terms);

    // Exact-rational path: coefficients given as numerator/denominator.
    static SparsePolynomial from_rational_terms(
        int num_vars,
        const std::vector<std::pair<std::pair<long long, long long>,
                                    std::vector<std::uint32_t>>>& terms);

    // Parses a sum of terms `c * x1^a1 * ... * xn^an`.  `min_vars` raises
    // the ambient dimension above the largest variable index seen.
    static SparsePolynomial parse(const std::string& text, int min_vars = 0);

    int num_vars() const { return num_vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::uint32_t total_degree() const;
    std::uint32_t degree_in(int var) const;
    double max_abs_coeff() const;

    double operator()(std::span<const double> x) const { return eval(x); }
    double eval(std::span<const double> x) const;

    std::vector<SparsePolynomial> gradient() const;
    SparsePolynomial partial(int var) const;

    SparsePolynomial scaled(double c) const;

    // Slice fixing all variables but the first: g(t) = f(t, xprime).
    SparsePolynomial restrict_first(std::span<const double> xprime) const;

    std::string to_string() const;

private:
    void normalize();

    int num_vars_ = 0;
    std::vector<Term> terms_;
};

/*
 * Restriction of f to a ray: phi(rho) = f(rho * omega) for a unit
 * direction omega, stored by its univariate coefficient sequence.
 */
struct UnivariateRestriction {
    std::vector<double> coeffs;      // coeffs[d] multiplies rho^d
    std::vector<double> direction;

    double eval(double rho) const;
    UnivariateRestriction derivative() const;
};

UnivariateRestriction restrict_to_ray(const SparsePolynomial& f,
                                      std::span<const double> omega);

// Smallest degree with a nonzero coefficient; nullopt when the
// restriction vanishes identically.  Float coefficients use a relative
// threshold of 1e-14 against the largest magnitude.
std::optional<int> vanishing_order(const UnivariateRestriction& phi);

}  // namespace singlab
