#include "doctest.h"

#include <cmath>

#include "singlab/exponents.hpp"

using namespace singlab;

namespace {

const Region kSquare = Region::cube(2, -1.0, 1.0);

}  // namespace

TEST_CASE("sublevel volume slope for the circle is the codimension over order") {
    // |{ x^2 + y^2 <= t }| = pi t: slope 1 in t
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto fit = singularity_exponent(f, kSquare, 5000000, 17);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.r_squared >= 0.98);
}

TEST_CASE("sublevel volume slope for the anisotropic example") {
    // |{ x^2 + y^4 <= t }| = c t^{3/4} for t <= 1
    const auto f = SparsePolynomial::parse("x1^2 + x2^4");
    const auto fit = singularity_exponent(f, kSquare, 5000000, 17);
    CHECK(fit.slope == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("gradient exponent shortcut at regular points") {
    const auto f = SparsePolynomial::parse("x1 + x2^2");
    const auto sample = sample_zero_set(f, kSquare, 1000, 1e-10, 17);
    const auto fit = loja_gradient_exponent(f, sample, 20000, 17);
    CHECK(fit.slope == 0.0);
}

TEST_CASE("gradient exponent near an isolated quadratic zero") {
    // |grad f| = 2 r = 2 |f|^{1/2}
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto sample = sample_zero_set(f, kSquare, 2000, 1e-10, 17);
    const auto fit = loja_gradient_exponent(f, sample, 60000, 17);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(0.06));
    CHECK(fit.r_squared >= 0.95);
}

TEST_CASE("gradient exponent separates the anisotropic zero") {
    // binding direction is x2: |grad f| ~ 4 |f|^{3/4} along x1 = 0
    const auto f = SparsePolynomial::parse("x1^2 + x2^4");
    const auto sample = sample_zero_set(f, kSquare, 2000, 1e-10, 17);
    const auto fit = loja_gradient_exponent(f, sample, 60000, 17);
    CHECK(fit.slope == doctest::Approx(0.75).epsilon(0.06));
}

TEST_CASE("distance exponent recovers the vanishing order") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto sample = sample_zero_set(f, kSquare, 2000, 1e-10, 17);
    const auto fit = loja_distance_exponent(f, kSquare, sample, 60000, 17);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("estimated slopes are invariant under scaling of f") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto g = f.scaled(8.0);
    const auto sf = sample_zero_set(f, kSquare, 2000, 1e-10, 17);
    const auto sg = sample_zero_set(g, kSquare, 2000, 1e-10, 17);
    const auto ff = loja_gradient_exponent(f, sf, 60000, 17);
    const auto fg = loja_gradient_exponent(g, sg, 60000, 17);
    CHECK(std::abs(ff.slope - fg.slope) <= 0.03);
}

TEST_CASE("full report satisfies the sum inequality with margin") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    ExponentBudget budget;
    budget.volume_samples = 5000000;
    const auto rep = exponent_inequality_report(f, kSquare, budget, 17);
    CHECK(rep.inequality_margin >= -0.1);
    CHECK(rep.inequality_margin == doctest::Approx(0.5).epsilon(0.3));
    CHECK(!rep.codim_warning);
    // consistency between the two alpha routes: 1 - beta0 <= alpha0 slack
    CHECK(1.0 - rep.beta0.slope <= rep.alpha0.slope + 0.1);
}
