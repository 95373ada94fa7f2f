#include "singlab/suite.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "singlab/cutoff.hpp"
#include "singlab/errors.hpp"
#include "singlab/exponents.hpp"
#include "singlab/quadrature.hpp"
#include "singlab/zero_geometry.hpp"

namespace singlab {

namespace {

using nlohmann::json;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct SuiteBuilder {
    const SuiteOptions& opt;
    SuiteResult result;

    void add_row(const std::string& id, const std::string& command,
                 const std::string& input, json payload, double wall_s) {
        result.rows.push_back(
            make_row(id, command, input, std::move(payload), wall_s * 1e3));
    }

    void add_check(const std::string& name, bool passed, double wall_s,
                   const std::string& detail) {
        result.checks.push_back({name, passed, wall_s, detail});
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

bool near(double v, double target, double tol) {
    return std::abs(v - target) <= tol;
}

}  // namespace

SuiteResult run_suite(const SuiteOptions& opt) {
    SuiteBuilder sb{opt, {}};
    const std::uint64_t seed = opt.seed;
    const int threads = opt.threads;

    const auto xy = SparsePolynomial::parse("x1*x2");
    const auto circ2 = SparsePolynomial::parse("x1^2 + x2^2");
    const auto aniso = SparsePolynomial::parse("x1^2 + x2^4");
    const auto sph3 = SparsePolynomial::parse("x1^2 + x2^2 + x3^2");
    const auto quart3 = SparsePolynomial::parse(
        "x1^4 + x2^4 + x3^4 + 2*x1^2*x2^2 + 2*x1^2*x3^2 + 2*x2^2*x3^2");
    const auto line3 = SparsePolynomial::parse("x1^2 + x2^2", 3);
    const auto cubic = SparsePolynomial::parse("x1^3 - x1*x2");

    const Region U1 = Region::cube(1, -1.0, 1.0);
    const Region U2 = Region::cube(2, -1.0, 1.0);
    const Region U3 = Region::cube(3, -1.0, 1.0);

    const ShellBudget b2d{200000, 24};
    const ShellBudget b3d{800000, 24};

    auto grad_probe = [&](const SparsePolynomial& f, double p, const Region& U,
                          const ShellBudget& b, const std::string& id) {
        Stopwatch watch;
        const auto v = integrate_grad_log(f, p, U, b, seed, threads);
        sb.add_row(id, "integrate", f.to_string() + "|p=" + fmt(p),
                   to_json(v, false), watch.seconds());
        return v;
    };
    auto log_probe = [&](const SparsePolynomial& f, double p, const Region& U,
                         const ShellBudget& b, const std::string& id) {
        Stopwatch watch;
        const auto v = integrate_abs_log(f, p, U, b, seed, threads);
        sb.add_row(id, "log-lp", f.to_string() + "|p=" + fmt(p),
                   to_json(v, false), watch.seconds());
        return v;
    };
    auto gamma_search = [&](const SparsePolynomial& f, const Region& U,
                            double lo, double hi, double tol,
                            const ShellBudget& b, const std::string& id) {
        Stopwatch watch;
        const auto r = critical_exponent(f, U, lo, hi, tol, b, seed, threads);
        sb.add_row(id, "critical-exponent",
                   f.to_string() + "|" + fmt(lo) + "," + fmt(hi), to_json(r),
                   watch.seconds());
        return r;
    };

    // --- 1: the motivating product example, threshold at p = 1 ---
    {
        Stopwatch watch;
        const auto conv = grad_probe(xy, 0.9, U2, b2d, "xy-p0.9");
        const auto div = grad_probe(xy, 1.1, U2, b2d, "xy-p1.1");
        const auto gamma = gamma_search(xy, U2, 0.5, 1.5, 0.1, b2d, "xy-gamma");
        const double t = watch.seconds();
        const bool ok = conv.kind == VerdictKind::Convergent &&
                        div.kind == VerdictKind::Divergent &&
                        near(gamma.gamma, 1.0, 0.1) && t <= 60.0;
        sb.add_check("1-product-threshold", ok, t,
                     "p0.9=" + to_string(conv.kind) + " p1.1=" +
                         to_string(div.kind) + " gamma=" + fmt(gamma.gamma));
    }

    // --- 2: example-family critical exponents ---
    {
        Stopwatch watch;
        const auto g1 = gamma_search(circ2, U2, 0.5, 3.5, 0.1, b2d, "circ2-gamma");
        const auto g2 = gamma_search(aniso, U2, 0.5, 3.0, 0.1, b2d, "aniso-gamma");
        const auto g3 = gamma_search(sph3, U3, 1.0, 4.0, 0.15, b3d, "sph3-gamma");
        const double t = watch.seconds();
        const bool ok = near(g1.gamma, 2.0, 0.1) && near(g2.gamma, 1.5, 0.1) &&
                        near(g3.gamma, 3.0, 0.15) && t <= 600.0;
        sb.add_check("2-family-gamma", ok, t,
                     "gamma2=" + fmt(g1.gamma) + " gamma1.5=" + fmt(g2.gamma) +
                         " gamma3=" + fmt(g3.gamma));
    }

    // --- 3: blow-up exactly at codimension in R^3 ---
    {
        Stopwatch watch;
        const auto div = grad_probe(sph3, 3.0, U3, b3d, "sph3-p3.0");
        const auto conv = grad_probe(sph3, 2.7, U3, b3d, "sph3-p2.7");
        const double t = watch.seconds();
        const bool ok = div.kind == VerdictKind::Divergent &&
                        conv.kind == VerdictKind::Convergent;
        sb.add_check("3-codim-blowup", ok, t,
                     "p3.0=" + to_string(div.kind) +
                         " p2.7=" + to_string(conv.kind));
    }

    // --- 4: gradient of log integrable at p = 1 ---
    {
        Stopwatch watch;
        bool ok = true;
        std::string detail;
        const std::vector<std::pair<const SparsePolynomial*, const Region*>>
            cases{{&circ2, &U2}, {&aniso, &U2}, {&sph3, &U3}, {&quart3, &U3}};
        int i = 0;
        for (const auto& [f, U] : cases) {
            const auto v = grad_probe(*f, 1.0, *U,
                                      U->dim() == 3 ? b3d : b2d,
                                      "w11-" + std::to_string(++i));
            ok = ok && v.kind == VerdictKind::Convergent;
            detail += to_string(v.kind)[0];
        }
        sb.add_check("4-w11-instances", ok, watch.seconds(), detail);
    }

    // --- 5: log |f| in every L^p ---
    {
        Stopwatch watch;
        bool ok = true;
        for (double p : {1.0, 2.0, 4.0}) {
            ok = ok && log_probe(xy, p, U2, b2d, "loglp-xy-" + fmt(p)).kind ==
                           VerdictKind::Convergent;
            ok = ok &&
                 log_probe(aniso, p, U2, b2d, "loglp-aniso-" + fmt(p)).kind ==
                     VerdictKind::Convergent;
        }
        const auto one_d = log_probe(SparsePolynomial::parse("x1"), 1.0, U1,
                                     b2d, "loglp-1d");
        ok = ok && one_d.kind == VerdictKind::Convergent &&
             near(one_d.value, 2.0, 0.04);
        sb.add_check("5-log-lp", ok, watch.seconds(),
                     "1d value=" + fmt(one_d.value));
    }

    // --- 6: radial rigidity along random rays ---
    {
        Stopwatch watch;
        Rng rng(seed ^ 0x5adULL);
        bool ok = true;
        int divergent = 0;
        for (const SparsePolynomial* f : {&circ2, &xy}) {
            for (int ray = 0; ray < 20; ++ray) {
                std::vector<double> omega;
                IntegralVerdict v;
                for (;;) {
                    omega = rng.unit_vector(2);
                    try {
                        v = radial_blowup_check(*f, omega, 0.5);
                        break;
                    } catch (const DegenerateRay&) {
                        // measure-zero direction; redraw
                    }
                }
                if (v.kind == VerdictKind::Divergent) ++divergent;
                else ok = false;
            }
        }
        sb.add_row("radial-rays", "radial", "circ2+xy rays",
                   json{{"divergent", divergent}, {"total", 40}},
                   watch.seconds());
        sb.add_check("6-radial-rigidity", ok && divergent == 40,
                     watch.seconds(), std::to_string(divergent) + "/40 divergent");
    }

    // --- 7 and 8: exponent inequality and Lojasiewicz fits ---
    {
        Stopwatch watch;
        const ExponentBudget eb;
        const auto rep_circ2 =
            exponent_inequality_report(circ2, U2, eb, seed + 11);
        const auto rep_aniso =
            exponent_inequality_report(aniso, U2, eb, seed + 12);
        const auto rep_sph3 = exponent_inequality_report(sph3, U3, eb, seed + 13);
        sb.add_row("exp-circ2", "exponents", circ2.to_string(),
                   to_json(rep_circ2), 0.0);
        sb.add_row("exp-aniso", "exponents", aniso.to_string(),
                   to_json(rep_aniso), 0.0);
        sb.add_row("exp-sph3", "exponents", sph3.to_string(), to_json(rep_sph3),
                   0.0);
        const double t = watch.seconds();

        const bool margins_ok =
            rep_circ2.inequality_margin >= -0.1 &&
            rep_aniso.inequality_margin >= -0.1 &&
            rep_sph3.inequality_margin >= -0.1 &&
            near(rep_circ2.inequality_margin, 0.5, 0.15) &&
            near(rep_aniso.inequality_margin, 0.5, 0.15) &&
            near(rep_sph3.inequality_margin, 1.0, 0.15);
        sb.add_check("7-exponent-inequality", margins_ok, t,
                     "margins=" + fmt(rep_circ2.inequality_margin) + "," +
                         fmt(rep_aniso.inequality_margin) + "," +
                         fmt(rep_sph3.inequality_margin));

        const bool fits_ok =
            near(rep_circ2.alpha_dist.slope, 2.0, 0.1) &&
            near(rep_circ2.beta0.slope, 0.5, 0.05) &&
            near(rep_aniso.beta0.slope, 0.75, 0.05) &&
            rep_circ2.beta0.r_squared >= 0.95 &&
            rep_aniso.beta0.r_squared >= 0.95;
        sb.add_check("8-lojasiewicz-fits", fits_ok, t,
                     "alpha=" + fmt(rep_circ2.alpha_dist.slope) +
                         " beta_circ2=" + fmt(rep_circ2.beta0.slope) +
                         " beta_aniso=" + fmt(rep_aniso.beta0.slope));
    }

    // --- 9: dimension estimates and the projection property ---
    {
        Stopwatch watch;
        std::vector<double> box_eps, vol_eps;
        for (int j = 1; j <= 8; ++j) box_eps.push_back(std::exp2(-j));
        for (int j = 1; j <= 5; ++j) vol_eps.push_back(std::exp2(-j));

        struct Case {
            const SparsePolynomial* f;
            const Region* U;
            double dim;
            const char* name;
        };
        const std::vector<Case> cases{{&circ2, &U2, 0.0, "point"},
                                      {&xy, &U2, 1.0, "axes"},
                                      {&line3, &U3, 1.0, "line3"}};
        bool ok = true;
        std::string detail;
        for (const auto& c : cases) {
            const auto sample =
                sample_zero_set(*c.f, *c.U, 4000, 1e-10, seed + 21);
            const auto box = box_dimension(sample, box_eps);
            const auto vol = neighborhood_volume_exponent(
                *c.f, *c.U, sample, vol_eps, 200000, seed + 22);
            const auto proj = box_dimension(project_drop_first(sample), box_eps);
            sb.add_row(std::string("dim-") + c.name, "dimension",
                       c.f->to_string(),
                       json{{"box", to_json(box)},
                            {"volume", to_json(vol)},
                            {"projection", to_json(proj)}},
                       0.0);
            ok = ok && near(box.dim_value, c.dim, 0.15) &&
                 near(vol.dim_value, c.dim, 0.15) &&
                 proj.dim_value <= box.dim_value + 0.2;
            detail += std::string(c.name) + ":" + fmt(box.dim_value) + "/" +
                      fmt(vol.dim_value) + " ";
        }
        sb.add_check("9-dimension", ok, watch.seconds(), detail);
    }

    // --- 10: monotonicity-change bound over random slices ---
    {
        Stopwatch watch;
        const auto m_circ = max_monotonicity_changes(circ2, U2, 200, seed + 31);
        const auto m_cubic = max_monotonicity_changes(cubic, U2, 200, seed + 32);
        const auto m_xy = max_monotonicity_changes(xy, U2, 200, seed + 33);
        sb.add_row("mono", "dimension", "monotonicity",
                   json{{"circ2", m_circ.max_changes},
                        {"cubic", m_cubic.max_changes},
                        {"xy", m_xy.max_changes}},
                   watch.seconds());
        const bool ok =
            m_circ.max_changes == 1 && m_cubic.max_changes <= 2 &&
            m_xy.max_changes == 0 &&
            m_circ.max_changes <=
                static_cast<int>(circ2.degree_in(0)) - 1 + 1 &&
            m_cubic.max_changes <= static_cast<int>(cubic.degree_in(0)) - 1;
        sb.add_check("10-monotonicity", ok, watch.seconds(),
                     "m=" + std::to_string(m_circ.max_changes) + "," +
                         std::to_string(m_cubic.max_changes) + "," +
                         std::to_string(m_xy.max_changes));
    }

    // --- 11: cutoff partition battery ---
    {
        Stopwatch watch;
        bool ok = true;
        std::string detail;
        Rng rng(seed ^ 0xc0ffeeULL);

        // Two-level disjoint family with touching dilates.
        std::vector<DyadicCube> family{
            {2, {0, 0}},  {2, {-1, -1}}, {3, {2, 0}},
            {3, {0, 2}},  {4, {12, 0}},  {4, {0, 12}}};
        const auto partition = build_partition(family);

        double worst_residual = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const auto& cube =
                partition.cubes()[rng.next() % partition.cubes().size()];
            const double s = cube.side();
            std::vector<double> x(2);
            for (int d = 0; d < 2; ++d)
                x[d] = (static_cast<double>(cube.index[d]) + rng.u01()) * s;
            double total = 0.0;
            for (size_t i = 0; i < partition.cubes().size(); ++i)
                total += partition.phi(i, x);
            worst_residual = std::max(worst_residual, std::abs(total - 1.0));
        }
        ok = ok && worst_residual <= 1e-12;
        detail += "pou=" + fmt(worst_residual) + " ";

        int support_violations = 0;
        for (int k = 0; k < 10000;) {
            std::vector<double> x{rng.uniform(-0.6, 1.2), rng.uniform(-0.6, 1.2)};
            bool in_dilate = false;
            for (const auto& cube : partition.cubes())
                if (cube.dilate_contains(x)) in_dilate = true;
            if (in_dilate) continue;
            ++k;
            for (size_t i = 0; i < partition.cubes().size(); ++i)
                if (partition.phi(i, x) != 0.0) ++support_violations;
        }
        ok = ok && support_violations == 0;
        detail += "supp=" + std::to_string(support_violations) + " ";

        // chi == 1 exactly within eps/4 of a sampled circle.
        const double eps = std::exp2(-4);
        std::vector<std::vector<double>> circle;
        for (int k = 0; k < 512; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k / 512.0;
            circle.push_back({0.7 * std::cos(th), 0.7 * std::sin(th)});
        }
        const auto near_partition =
            build_partition(dyadic_cover_fattened(circle, eps));
        int chi_failures = 0;
        for (int k = 0; k < 10000; ++k) {
            const auto& z = circle[rng.next() % circle.size()];
            std::vector<double> x{z[0] + rng.uniform(-eps / 4, eps / 4),
                                  z[1] + rng.uniform(-eps / 4, eps / 4)};
            if (near_partition.chi(x) != 1.0) ++chi_failures;
        }
        ok = ok && chi_failures == 0;
        detail += "chi1=" + std::to_string(chi_failures) + " ";

        // Cross-level uniformity of the normalized derivative sups.
        std::vector<DyadicCube> mixed{{2, {0, 0}},
                                      {3, {-3, -3}},
                                      {4, {8, 0}},
                                      {5, {0, 16}},
                                      {6, {40, 40}}};
        const std::vector<int> alpha{1, 0};
        const auto bound = verify_derivative_bound(build_partition(mixed), alpha,
                                                   4000, seed + 41);
        ok = ok && bound.max_over_min <= 3.0;
        detail += "dratio=" + fmt(bound.max_over_min) + " ";

        // Gradient norm scaling for a point set.
        std::vector<double> eps_range;
        for (int j = 2; j <= 7; ++j) eps_range.push_back(std::exp2(-j));
        const auto flest =
            verify_flest({{0.0, 0.0}}, eps_range, 1.5, 1.2, 0.0, 150000,
                         seed + 42);
        const double oracle = 2.0 / 1.2 - 1.0;
        ok = ok && near(flest.fit.slope, oracle, 0.2) &&
             flest.fit.r_squared >= 0.9;
        detail += "flest=" + fmt(flest.fit.slope);

        sb.add_row("cutoff", "cutoff", "hp-battery",
                   json{{"pou_residual", worst_residual},
                        {"support_violations", support_violations},
                        {"chi_failures", chi_failures},
                        {"derivative_ratio", bound.max_over_min},
                        {"flest", to_json(flest)}},
                   watch.seconds());
        sb.add_check("11-cutoff-partition", ok, watch.seconds(), detail);
    }

    return sb.result;
}

}  // namespace singlab
