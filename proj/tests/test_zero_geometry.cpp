#include "doctest.h"

#include <cmath>

#include "singlab/errors.hpp"
#include "singlab/zero_geometry.hpp"

using namespace singlab;

namespace {

const Region kSquare = Region::cube(2, -1.0, 1.0);

std::vector<double> dyadic_levels(int from, int to) {
    std::vector<double> out;
    for (int j = from; j <= to; ++j) out.push_back(std::exp2(-j));
    return out;
}

}  // namespace

TEST_CASE("descent lands on the zero set within tolerance") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2 - 0.25");
    const auto sample = sample_zero_set(f, kSquare, 500, 1e-10, 9);
    CHECK(sample.size() >= 400);
    for (size_t k = 0; k < sample.size(); ++k) {
        CHECK(sample.residuals[k] <= 1e-10);
        CHECK(std::abs(f.eval(sample.points[k])) <= 1e-10);
        // on the circle of radius 1/2
        CHECK(std::hypot(sample.points[k][0], sample.points[k][1]) ==
              doctest::Approx(0.5).epsilon(1e-4));
    }
}

TEST_CASE("descent also reaches singular zeros") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto sample = sample_zero_set(f, kSquare, 200, 1e-10, 9);
    CHECK(sample.size() >= 20);
    for (const auto& x : sample.points)
        CHECK(std::hypot(x[0], x[1]) <= 2e-5);
}

TEST_CASE("a polynomial with empty zero set exhausts its budget") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2 + 1");
    CHECK_THROWS_AS(sample_zero_set(f, kSquare, 200, 1e-10, 9),
                    EmptyAfterBudget);
}

TEST_CASE("distance to a circle matches the radial formula") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2 - 0.25");
    const auto sample = sample_zero_set(f, kSquare, 2000, 1e-10, 9);
    for (double r : {0.1, 0.35, 0.8}) {
        const std::vector<double> x{r, 0.0};
        const auto d = distance_to_zero(f, x, sample);
        const double exact = std::abs(r - 0.5);
        CHECK(d.upper == doctest::Approx(exact).epsilon(0.02));
        CHECK(d.lower <= exact + 1e-9);
    }
}

TEST_CASE("box dimension of point, curve, and axis pair") {
    const auto eps = dyadic_levels(1, 8);

    const auto point = sample_zero_set(SparsePolynomial::parse("x1^2 + x2^2"),
                                       kSquare, 2000, 1e-10, 9);
    CHECK(box_dimension(point, eps).dim_value == doctest::Approx(0.0).scale(1).epsilon(0.15));

    const auto circle = sample_zero_set(
        SparsePolynomial::parse("x1^2 + x2^2 - 0.25"), kSquare, 4000, 1e-10, 9);
    CHECK(box_dimension(circle, eps).dim_value ==
          doctest::Approx(1.0).epsilon(0.15));

    const auto axes = sample_zero_set(SparsePolynomial::parse("x1*x2"),
                                      kSquare, 4000, 1e-10, 9);
    CHECK(box_dimension(axes, eps).dim_value ==
          doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("box dimension input validation") {
    const auto sample = sample_zero_set(
        SparsePolynomial::parse("x1^2 + x2^2 - 0.25"), kSquare, 2000, 1e-10, 9);
    CHECK_THROWS(box_dimension(sample, dyadic_levels(1, 3)));  // too few levels
    ZeroSample tiny = sample;
    tiny.points.resize(10);
    tiny.residuals.resize(10);
    tiny.steps.resize(10);
    CHECK_THROWS(box_dimension(tiny, dyadic_levels(1, 8)));
}

TEST_CASE("neighborhood volume exponent agrees with codimension") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2 - 0.25");
    const auto sample = sample_zero_set(f, kSquare, 4000, 1e-10, 9);
    const auto est = neighborhood_volume_exponent(f, kSquare, sample,
                                                  dyadic_levels(1, 5), 200000, 9);
    CHECK(est.dim_value == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("projection drops the first coordinate only") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2 - 0.25");
    const auto sample = sample_zero_set(f, kSquare, 1500, 1e-10, 9);
    const auto proj = project_drop_first(sample);
    CHECK(proj.num_vars == 1);
    REQUIRE(proj.size() == sample.size());
    CHECK(proj.points[0][0] == sample.points[0][1]);
}

TEST_CASE("monotonicity breakpoints of a cubic slice") {
    // d/dx1 (x1^3 - x1 x2) = 3 x1^2 - x2: roots +-sqrt(x2/3)
    const auto f = SparsePolynomial::parse("x1^3 - x1*x2");
    const std::vector<double> slice{0.75};
    const auto roots = monotonicity_breakpoints(f, slice, -1.0, 1.0);
    REQUIRE(roots.size() == 2);
    const double exact = std::sqrt(0.25);
    CHECK(roots[0] == doctest::Approx(-exact).epsilon(1e-8));
    CHECK(roots[1] == doctest::Approx(exact).epsilon(1e-8));

    const std::vector<double> below{-0.5};
    CHECK(monotonicity_breakpoints(f, below, -1.0, 1.0).empty());
}

TEST_CASE("slice degenerate in x1 is rejected") {
    const auto f = SparsePolynomial::parse("x2^2");
    const std::vector<double> slice{0.0};
    CHECK_THROWS_AS(monotonicity_breakpoints(f, slice, -1.0, 1.0),
                    DegenerateSlice);
}

TEST_CASE("monotonicity change counts respect the degree bound") {
    const auto circ = SparsePolynomial::parse("x1^2 + x2^2");
    const auto cubic = SparsePolynomial::parse("x1^3 - x1*x2");
    const auto prod = SparsePolynomial::parse("x1*x2");
    const auto m_circ = max_monotonicity_changes(circ, kSquare, 100, 9);
    const auto m_cubic = max_monotonicity_changes(cubic, kSquare, 100, 9);
    const auto m_prod = max_monotonicity_changes(prod, kSquare, 100, 9);
    CHECK(m_circ.max_changes == 1);
    CHECK(m_cubic.max_changes <= 2);
    CHECK(m_prod.max_changes == 0);
    CHECK(m_cubic.max_changes <= static_cast<int>(cubic.degree_in(0)) - 1);
}
