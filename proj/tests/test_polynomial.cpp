#include "doctest.h"

#include <cmath>
#include <vector>

#include "singlab/errors.hpp"
#include "singlab/polynomial.hpp"
#include "singlab/rng.hpp"

using namespace singlab;

TEST_CASE("parse round trip and evaluation") {
    const auto f = SparsePolynomial::parse("3*x1^2*x2 - 0.5*x2^3 + 1");
    CHECK(f.num_vars() == 2);
    const std::vector<double> x{2.0, -1.0};
    CHECK(f.eval(x) == doctest::Approx(3.0 * 4.0 * (-1.0) - 0.5 * (-1.0) + 1.0));
    CHECK(f.total_degree() == 3);
    CHECK(f.degree_in(0) == 2);
    CHECK(f.degree_in(1) == 3);
}

TEST_CASE("parse handles implicit coefficients, signs, and min_vars") {
    const auto f = SparsePolynomial::parse("-x1 + x2^2", 3);
    CHECK(f.num_vars() == 3);
    CHECK(f.eval(std::vector<double>{1.0, 2.0, 7.0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(SparsePolynomial::parse("x1 + $"), ParseError);
}

TEST_CASE("evaluation is independent of term construction order") {
    std::vector<SparsePolynomial::Term> a{{1.0, {2, 0}}, {-3.0, {0, 1}},
                                          {0.25, {1, 1}}};
    std::vector<SparsePolynomial::Term> b{a[2], a[0], a[1]};
    const SparsePolynomial fa(2, a), fb(2, b);
    Rng rng(7);
    for (int k = 0; k < 100; ++k) {
        const std::vector<double> x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(fa.eval(x) == fb.eval(x));
    }
}

TEST_CASE("gradient matches finite differences") {
    const auto f =
        SparsePolynomial::parse("x1^2*x2^4 + 2*x1*x3 - x2 + 0.5*x3^3");
    const auto grad = f.gradient();
    REQUIRE(grad.size() == 3);
    Rng rng(11);
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1),
                              rng.uniform(-1, 1)};
        for (int i = 0; i < 3; ++i) {
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (f.eval(xp) - f.eval(xm)) / (2 * h);
            CHECK(grad[i].eval(x) ==
                  doctest::Approx(fd).epsilon(1e-6).scale(1.0 + std::abs(fd)));
        }
    }
}

TEST_CASE("rational construction gives exact small-ratio coefficients") {
    const auto f = SparsePolynomial::from_rational_terms(
        1, {{{1, 4}, {2}}, {{-1, 2}, {0}}});
    CHECK(f.eval(std::vector<double>{2.0}) == doctest::Approx(0.5));
    CHECK(f.terms()[1].coeff == 0.25);
}

TEST_CASE("ray restriction agrees with direct evaluation") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^4 - 0.3*x1*x2");
    Rng rng(13);
    for (int k = 0; k < 20; ++k) {
        const auto omega = rng.unit_vector(2);
        const auto phi = restrict_to_ray(f, omega);
        for (double rho : {0.1, 0.37, 0.9}) {
            const std::vector<double> x{rho * omega[0], rho * omega[1]};
            CHECK(phi.eval(rho) == doctest::Approx(f.eval(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("restriction rejects non-unit and zero directions") {
    const auto f = SparsePolynomial::parse("x1 + x2");
    CHECK_THROWS(restrict_to_ray(f, std::vector<double>{1.0, 1.0}));
    CHECK_THROWS(restrict_to_ray(f, std::vector<double>{0.0, 0.0}));
}

TEST_CASE("vanishing order along rays") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const double s = 1.0 / std::sqrt(2.0);
    const auto phi = restrict_to_ray(f, std::vector<double>{s, s});
    CHECK(vanishing_order(phi) == 2);

    const auto g = SparsePolynomial::parse("x1*x2");
    const auto axis = restrict_to_ray(g, std::vector<double>{1.0, 0.0});
    CHECK(!vanishing_order(axis).has_value());
}

TEST_CASE("univariate derivative and slices") {
    const auto f = SparsePolynomial::parse("x1^3 - x1*x2");
    const auto slice = f.restrict_first(std::vector<double>{0.5});
    CHECK(slice.num_vars() == 1);
    CHECK(slice.eval(std::vector<double>{2.0}) == doctest::Approx(8.0 - 1.0));

    const auto phi =
        restrict_to_ray(SparsePolynomial::parse("x1^3"), std::vector<double>{1.0});
    const auto dphi = phi.derivative();
    CHECK(dphi.eval(2.0) == doctest::Approx(12.0));
}
