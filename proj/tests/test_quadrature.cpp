#include "doctest.h"

#include <cmath>

#include "singlab/errors.hpp"
#include "singlab/quadrature.hpp"

using namespace singlab;

namespace {

const Region kSquare = Region::cube(2, -1.0, 1.0);

const Shell* find_shell(const ShellProfile& profile, int level) {
    for (const auto& s : profile.shells)
        if (s.level == level) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("shell measures of f = x match the exact dyadic lengths") {
    const auto f = SparsePolynomial::parse("x1");
    const Region U = Region::cube(1, -1.0, 1.0);
    const auto profile = shell_decompose(f, U, 12, 100000, 5);
    // |x| in (2^{-j-1}, 2^{-j}] has length 2^{-j} inside [-1,1].
    for (int j = 0; j <= 6; ++j) {
        const Shell* s = find_shell(profile, j);
        REQUIRE(s != nullptr);
        const double exact = std::exp2(-j);
        CHECK(std::abs(s->measure - exact) <= 4.0 * s->measure_se + 1e-12);
    }
}

TEST_CASE("shell measure of the product singularity matches the log area") {
    const auto f = SparsePolynomial::parse("x1*x2");
    const auto profile = shell_decompose(f, kSquare, 12, 200000, 5);
    // area{ t < |xy| <= 2t } in [-1,1]^2, from A(t) = t (1 + log(1/t)):
    const Shell* s0 = find_shell(profile, 0);
    REQUIRE(s0 != nullptr);
    const double exact0 = 2.0 * (1.0 - std::log(2.0));
    CHECK(std::abs(s0->measure - exact0) <= 4.0 * s0->measure_se + 1e-12);
}

TEST_CASE("shell measures of the circle singularity are dyadic annuli") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto profile = shell_decompose(f, kSquare, 12, 200000, 5);
    const double pi = 3.14159265358979323846;
    for (int j = 1; j <= 6; ++j) {
        const Shell* s = find_shell(profile, j);
        REQUIRE(s != nullptr);
        const double exact = pi * std::exp2(-j - 1);
        CHECK(std::abs(s->measure - exact) <= 4.0 * s->measure_se + 1e-12);
    }
}

TEST_CASE("convergent value matches a closed form at p = 1") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto v = integrate_grad_log(f, 1.0, kSquare, {200000, 24}, 5);
    REQUIRE(v.kind == VerdictKind::Convergent);
    // integral of 2/r over the square: 16 log(1 + sqrt 2)
    const double exact = 16.0 * std::log(1.0 + std::sqrt(2.0));
    CHECK(v.value == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("1D absolute log integral hits its closed form") {
    const auto f = SparsePolynomial::parse("x1");
    const Region U = Region::cube(1, -1.0, 1.0);
    const auto v = integrate_abs_log(f, 1.0, U, {200000, 24}, 5);
    REQUIRE(v.kind == VerdictKind::Convergent);
    CHECK(v.value == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("tail slope tracks the analytic decay rate") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    // shell contributions scale like 2^{j (p-2)/2} at depth j, so the
    // fitted log2 slope should be (p - 2) / 2.
    for (double p : {1.0, 1.5}) {
        const auto v = integrate_grad_log(f, p, kSquare, {200000, 24}, 5);
        CHECK(v.tail_growth_rate ==
              doctest::Approx((p - 2.0) / 2.0).epsilon(0.10));
    }
}

TEST_CASE("verdicts at the motivating examples") {
    const auto xy = SparsePolynomial::parse("x1*x2");
    CHECK(integrate_grad_log(xy, 0.9, kSquare, {100000, 24}, 5).kind ==
          VerdictKind::Convergent);
    CHECK(integrate_grad_log(xy, 1.1, kSquare, {100000, 24}, 5).kind ==
          VerdictKind::Divergent);
}

TEST_CASE("results are identical across thread counts") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^4");
    const auto a = integrate_grad_log(f, 1.0, kSquare, {100000, 20}, 42, 1);
    const auto b = integrate_grad_log(f, 1.0, kSquare, {100000, 20}, 42, 4);
    CHECK(a.kind == b.kind);
    CHECK(a.value == b.value);
    REQUIRE(a.profile.shells.size() == b.profile.shells.size());
    for (size_t i = 0; i < a.profile.shells.size(); ++i) {
        CHECK(a.profile.shells[i].hits == b.profile.shells[i].hits);
        CHECK(a.profile.shells[i].contribution ==
              b.profile.shells[i].contribution);
    }
}

TEST_CASE("scaling f by a constant shifts shells but not verdicts") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const auto base = shell_decompose(f, kSquare, 14, 200000, 5);
    const auto doubled = shell_decompose(f.scaled(0.5), kSquare, 14, 200000, 5);
    // halving f moves each shell one level deeper
    for (int j = 2; j <= 8; ++j) {
        const Shell* a = find_shell(base, j);
        const Shell* b = find_shell(doubled, j + 1);
        REQUIRE(a != nullptr);
        REQUIRE(b != nullptr);
        const double se = std::hypot(a->measure_se, b->measure_se);
        CHECK(std::abs(a->measure - b->measure) <= 4.0 * se + 1e-12);
    }
    for (double c : {2.0, 10.0, 0.1}) {
        CHECK(integrate_grad_log(f.scaled(c), 1.0, kSquare, {100000, 24}, 5)
                  .kind == VerdictKind::Convergent);
        CHECK(integrate_grad_log(f.scaled(c), 2.5, kSquare, {100000, 24}, 5)
                  .kind == VerdictKind::Divergent);
    }
}

TEST_CASE("critical exponent bisection on the product example") {
    const auto xy = SparsePolynomial::parse("x1*x2");
    const auto r =
        critical_exponent(xy, kSquare, 0.5, 1.5, 0.1, {100000, 24}, 5);
    CHECK(r.gamma == doctest::Approx(1.0).epsilon(0.1));
    CHECK(r.bracket_hi - r.bracket_lo <= 0.1 + 1e-12);
    CHECK_THROWS_AS(
        critical_exponent(xy, kSquare, 1.2, 1.5, 0.1, {100000, 24}, 5),
        BadBracket);
}

TEST_CASE("radial check separates rays from the 2D picture") {
    const auto f = SparsePolynomial::parse("x1^2 + x2^2");
    const double s = 1.0 / std::sqrt(2.0);
    const auto v = radial_blowup_check(f, std::vector<double>{s, s}, 0.5);
    CHECK(v.kind == VerdictKind::Divergent);

    const auto g = SparsePolynomial::parse("x1*x2 + 1");
    const auto w = radial_blowup_check(g, std::vector<double>{s, s}, 0.5);
    CHECK(w.kind == VerdictKind::Convergent);

    const auto xy = SparsePolynomial::parse("x1*x2");
    CHECK_THROWS_AS(
        radial_blowup_check(xy, std::vector<double>{1.0, 0.0}, 0.5),
        DegenerateRay);
}
