#include "doctest.h"

#include <cmath>
#include <vector>

#include "singlab/cutoff.hpp"
#include "singlab/rng.hpp"

using namespace singlab;

namespace {

std::vector<DyadicCube> mixed_family() {
    return {{2, {0, 0}},  {2, {-1, -1}}, {3, {2, 0}},
            {3, {0, 2}},  {4, {12, 0}},  {4, {0, 12}}};
}

std::vector<double> random_point_in(const DyadicCube& cube, Rng& rng) {
    const double s = cube.side();
    std::vector<double> x(cube.dim());
    for (int d = 0; d < cube.dim(); ++d)
        x[d] = (static_cast<double>(cube.index[d]) + rng.u01()) * s;
    return x;
}

}  // namespace

TEST_CASE("bump profile plateaus and smooth bridge") {
    double out[4];
    bump_profile(0.3, 0, out);
    CHECK(out[0] == 1.0);
    bump_profile(1.0, 0, out);
    CHECK(out[0] == 1.0);
    bump_profile(1.5, 0, out);
    CHECK(out[0] == 0.0);
    bump_profile(2.0, 3, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);

    double prev = 1.0;
    for (double t = 1.0; t <= 1.5; t += 0.01) {
        bump_profile(t, 0, out);
        CHECK(out[0] <= prev + 1e-12);
        CHECK(out[0] >= 0.0);
        prev = out[0];
    }
}

TEST_CASE("bump profile derivatives match finite differences") {
    const double h = 1e-6;
    for (double t : {1.05, 1.17, 1.25, 1.33, 1.45}) {
        double c[4], p[4], m[4];
        bump_profile(t, 2, c);
        bump_profile(t + h, 1, p);
        bump_profile(t - h, 1, m);
        CHECK(c[1] == doctest::Approx((p[0] - m[0]) / (2 * h)).epsilon(1e-4));
        CHECK(c[2] == doctest::Approx((p[1] - m[1]) / (2 * h)).epsilon(1e-4));
    }
}

TEST_CASE("cube bump derivatives match finite differences") {
    const DyadicCube cube{3, {2, -1}};
    Rng rng(23);
    const double h = 1e-5;
    for (int k = 0; k < 40; ++k) {
        // probe inside the (3/2)-dilate where the bump varies
        std::vector<double> x(2);
        const auto c = cube.center();
        for (int d = 0; d < 2; ++d)
            x[d] = c[d] + cube.side() * rng.uniform(-0.75, 0.75);
        for (int d = 0; d < 2; ++d) {
            std::vector<int> alpha(2, 0);
            alpha[d] = 1;
            auto xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            const double fd = (base_bump(cube, xp) - base_bump(cube, xm)) /
                              (2 * h);
            CHECK(base_bump(cube, x, alpha) ==
                  doctest::Approx(fd).epsilon(1e-4).scale(1.0 + std::abs(fd)));
        }
    }
}

TEST_CASE("partition of unity sums to one on the union") {
    const auto partition = build_partition(mixed_family());
    Rng rng(29);
    for (int k = 0; k < 10000; ++k) {
        const auto& cube =
            partition.cubes()[rng.next() % partition.cubes().size()];
        const auto x = random_point_in(cube, rng);
        double total = 0.0;
        for (size_t i = 0; i < partition.cubes().size(); ++i)
            total += partition.phi(i, x);
        CHECK(std::abs(total - 1.0) <= 1e-12);
        CHECK(std::abs(partition.chi(x) - total) <= 1e-13);
    }
}

TEST_CASE("bumps vanish identically outside the dilated cubes") {
    const auto partition = build_partition(mixed_family());
    Rng rng(31);
    int tested = 0;
    while (tested < 5000) {
        std::vector<double> x{rng.uniform(-0.8, 1.2), rng.uniform(-0.8, 1.2)};
        bool inside = false;
        for (const auto& cube : partition.cubes())
            if (cube.dilate_contains(x)) inside = true;
        if (inside) continue;
        ++tested;
        for (size_t i = 0; i < partition.cubes().size(); ++i)
            CHECK(partition.phi(i, x) == 0.0);
        CHECK(partition.chi(x) == 0.0);
    }
}

TEST_CASE("overlapping cubes are rejected") {
    std::vector<DyadicCube> bad{{2, {0, 0}}, {3, {1, 1}}};  // nested
    CHECK_THROWS(build_partition(bad));
}

TEST_CASE("segment cover has the expected cube count") {
    for (int m : {5, 6}) {
        std::vector<std::vector<double>> K;
        const int n_pts = 1 << 8;
        for (int i = 0; i <= n_pts; ++i)
            K.push_back({static_cast<double>(i) / n_pts, 0.0});
        const double eps = std::exp2(-m);
        const auto cover = dyadic_cover(K, eps);
        // one row of 2^m cubes, plus the half-open spill at x = 1
        CHECK(cover.size() == (1u << m) + 1);
    }
}

TEST_CASE("circle cover count scales like length over eps") {
    std::vector<std::vector<double>> K;
    for (int i = 0; i < 4096; ++i) {
        const double th = 2.0 * 3.14159265358979323846 * i / 4096.0;
        K.push_back({0.7 * std::cos(th), 0.7 * std::sin(th)});
    }
    for (int m : {4, 5, 6}) {
        const double eps = std::exp2(-m);
        const double length = 2.0 * 3.14159265358979323846 * 0.7;
        const auto cover = dyadic_cover(K, eps);
        CHECK(cover.size() >= static_cast<size_t>(length / eps));
        CHECK(cover.size() <= static_cast<size_t>(4.0 * length / eps));
    }
}

TEST_CASE("cover rejects scales that are not powers of two") {
    std::vector<std::vector<double>> K{{0.0, 0.0}};
    CHECK_THROWS(dyadic_cover(K, 0.3));
}

TEST_CASE("fattened cover freezes chi at one near the set") {
    std::vector<std::vector<double>> K;
    for (int i = 0; i < 256; ++i) {
        const double th = 2.0 * 3.14159265358979323846 * i / 256.0;
        K.push_back({0.7 * std::cos(th), 0.7 * std::sin(th)});
    }
    const double eps = std::exp2(-4);
    const auto partition = build_partition(dyadic_cover_fattened(K, eps));
    Rng rng(37);
    for (int k = 0; k < 5000; ++k) {
        const auto& z = K[rng.next() % K.size()];
        const std::vector<double> x{z[0] + rng.uniform(-eps / 4, eps / 4),
                                    z[1] + rng.uniform(-eps / 4, eps / 4)};
        CHECK(partition.chi(x) == 1.0);
    }
}

TEST_CASE("normalized derivative sups are uniform across levels") {
    std::vector<DyadicCube> family{{2, {0, 0}},
                                   {3, {-3, -3}},
                                   {4, {8, 0}},
                                   {5, {0, 16}},
                                   {6, {40, 40}}};
    const auto partition = build_partition(family);
    for (std::vector<int> alpha : {std::vector<int>{1, 0},
                                   std::vector<int>{0, 1},
                                   std::vector<int>{1, 1},
                                   std::vector<int>{2, 0}}) {
        const auto report = verify_derivative_bound(partition, alpha, 3000, 41);
        REQUIRE(report.normalized_sup.size() == family.size());
        CHECK(report.max_over_min <= 3.0);
        for (double s : report.normalized_sup) CHECK(s > 0.0);
    }
}

TEST_CASE("gradient norm scaling for a point and a segment") {
    std::vector<double> eps_range;
    for (int j = 2; j <= 7; ++j) eps_range.push_back(std::exp2(-j));

    // isolated point in the plane: norm ~ eps^{2/p' - 1}
    const auto point = verify_flest({{0.0, 0.0}}, eps_range, 1.5, 1.2, 0.0,
                                    100000, 43);
    CHECK(point.fit.slope == doctest::Approx(2.0 / 1.2 - 1.0).epsilon(0.3));
    CHECK(point.fit.r_squared >= 0.9);
    CHECK(point.bound_slope == doctest::Approx(0.5 + 1.0 / 1.2));

    // unit segment: codimension 1, norm ~ eps^{1/p' - 1}
    std::vector<std::vector<double>> segment;
    for (int i = 0; i <= 512; ++i)
        segment.push_back({static_cast<double>(i) / 512, 0.0});
    const auto seg = verify_flest(segment, eps_range, 1.0, 1.5, 1.0, 100000, 43);
    CHECK(seg.fit.slope == doctest::Approx(1.0 / 1.5 - 1.0).epsilon(0.3));
    CHECK(seg.bound_slope == doctest::Approx(0.0));
}
