// Command-line front end for the singularity laboratory.  Every
// subcommand prints a human-readable summary to stdout and can append a
// JSON-lines record (--out) and a CSV summary line (--csv).
//
// Exit codes: 0 convergent / success, 2 divergent, 3 inconclusive,
// 1 usage or runtime error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "singlab/cutoff.hpp"
#include "singlab/errors.hpp"
#include "singlab/exponents.hpp"
#include "singlab/quadrature.hpp"
#include "singlab/report.hpp"
#include "singlab/suite.hpp"
#include "singlab/zero_geometry.hpp"

namespace {

using namespace singlab;
using nlohmann::json;

struct CommonOpts {
    std::string f_text;
    int nvars = 0;
    std::string region_text;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    std::string out_path;
    std::string csv_path;
    std::string spec_path;
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool needs_poly) {
    if (needs_poly) {
        cmd->add_option("--f", c.f_text, "polynomial, e.g. \"x1^2 + x2^4\"")
            ->required();
        cmd->add_option("--nvars", c.nvars,
                        "minimum variable count (default: inferred)");
        cmd->add_option("--region", c.region_text,
                        "box as lo1,hi1,lo2,hi2,... (default: [-1,1]^n)");
    }
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--threads", c.threads,
                    "worker threads (0: THREADS env or hardware)");
    cmd->add_option("--out", c.out_path, "append a JSON-lines record here");
    cmd->add_option("--csv", c.csv_path, "append a CSV summary line here");
    cmd->add_option("--spec", c.spec_path,
                    "JSON file with the same keys; flags override it");
}

// Fill unset options from a JSON spec file.
void apply_spec(CommonOpts& c, const CLI::App* cmd) {
    if (c.spec_path.empty()) return;
    std::ifstream in(c.spec_path);
    if (!in) throw std::runtime_error("cannot read spec file: " + c.spec_path);
    json spec = json::parse(in);
    auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
    if (spec.contains("f") && unset("--f")) c.f_text = spec["f"];
    if (spec.contains("nvars") && unset("--nvars")) c.nvars = spec["nvars"];
    if (spec.contains("region") && unset("--region"))
        c.region_text = spec["region"];
    if (spec.contains("seed") && unset("--seed")) c.seed = spec["seed"];
    if (spec.contains("threads") && unset("--threads"))
        c.threads = spec["threads"];
}

SparsePolynomial load_poly(const CommonOpts& c) {
    return SparsePolynomial::parse(c.f_text, std::max(c.nvars, 1));
}

Region load_region(const CommonOpts& c, int n) {
    if (c.region_text.empty()) return Region::cube(n, -1.0, 1.0);
    Region U = Region::parse(c.region_text);
    if (U.dim() != n)
        throw std::runtime_error("region dimension does not match polynomial");
    return U;
}

void emit(const CommonOpts& c, const std::string& id,
          const std::string& command, const std::string& input, json payload,
          double wall_ms) {
    const ReportRow row = make_row(id, command, input, std::move(payload),
                                   wall_ms);
    if (!c.out_path.empty()) append_text_file(c.out_path, row.to_jsonl());
    if (!c.csv_path.empty()) {
        std::ifstream probe(c.csv_path);
        const bool fresh = !probe.good() || probe.peek() == EOF;
        if (fresh) append_text_file(c.csv_path, csv_header());
        append_text_file(c.csv_path, csv_line(row));
    }
}

int verdict_exit(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Convergent: return 0;
        case VerdictKind::Divergent: return 2;
        default: return 3;
    }
}

void print_verdict(const IntegralVerdict& v) {
    std::cout << to_string(v.kind);
    if (v.kind == VerdictKind::Convergent)
        std::cout << "  value=" << v.value << " +- " << v.error_bar;
    std::cout << "  tail_slope=" << v.tail_growth_rate << "  (" << v.reason
              << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for integrability near polynomial "
                 "zero sets"};
    app.require_subcommand(1);

    CommonOpts c;
    double p = 1.0;
    double bracket_lo = 0.5, bracket_hi = 3.5, tol = 0.1;
    ShellBudget budget;
    double eps = 0.5;
    std::string omega_text;
    int count = 4000;
    double residual_tol = 1e-10;
    int eps_levels = 8;
    std::string flest_spec = "1.0,1.5,1.0";
    std::int64_t flest_samples = 150000;

    auto* cmd_int = app.add_subcommand(
        "integrate", "shell-decomposed integral of |grad f / f|^p");
    add_common(cmd_int, c, true);
    cmd_int->add_option("--p", p, "exponent p")->required();
    cmd_int->add_option("--samples", budget.samples_per_shell,
                        "Monte Carlo samples per shell");
    cmd_int->add_option("--jmax", budget.j_max, "deepest dyadic shell");

    auto* cmd_log = app.add_subcommand(
        "log-lp", "shell-decomposed integral of |log|f||^p");
    add_common(cmd_log, c, true);
    cmd_log->add_option("--p", p, "exponent p")->required();
    cmd_log->add_option("--samples", budget.samples_per_shell,
                        "Monte Carlo samples per shell");
    cmd_log->add_option("--jmax", budget.j_max, "deepest dyadic shell");

    auto* cmd_gamma = app.add_subcommand(
        "critical-exponent", "bisection for the integrability threshold");
    add_common(cmd_gamma, c, true);
    cmd_gamma->add_option("--lo", bracket_lo, "convergent bracket end")
        ->required();
    cmd_gamma->add_option("--hi", bracket_hi, "divergent bracket end")
        ->required();
    cmd_gamma->add_option("--tol", tol, "bracket width target");
    cmd_gamma->add_option("--samples", budget.samples_per_shell,
                          "Monte Carlo samples per shell");
    cmd_gamma->add_option("--jmax", budget.j_max, "deepest dyadic shell");

    auto* cmd_radial = app.add_subcommand(
        "radial", "1D blow-up check of |phi'/phi| along a ray");
    add_common(cmd_radial, c, true);
    cmd_radial->add_option("--omega", omega_text,
                           "ray direction, comma separated")
        ->required();
    cmd_radial->add_option("--eps", eps, "integration radius");

    auto* cmd_exp = app.add_subcommand(
        "exponents", "Lojasiewicz exponent estimates and the sum inequality");
    add_common(cmd_exp, c, true);

    auto* cmd_zero = app.add_subcommand("zeroset",
                                        "descent sample of the zero set (CSV)");
    add_common(cmd_zero, c, true);
    cmd_zero->add_option("--count", count, "requested sample size");
    cmd_zero->add_option("--residual-tol", residual_tol,
                         "acceptance threshold on |f|");

    auto* cmd_dim = app.add_subcommand(
        "dimension", "box-count and volume-scaling dimension of the zero set");
    add_common(cmd_dim, c, true);
    cmd_dim->add_option("--count", count, "zero-set sample size");
    cmd_dim->add_option("--levels", eps_levels, "dyadic epsilon levels");

    auto* cmd_cut = app.add_subcommand(
        "cutoff", "dyadic cover of a zero-set sample and its gradient norms");
    add_common(cmd_cut, c, true);
    cmd_cut->add_option("--count", count, "zero-set sample size");
    cmd_cut->add_option("--eps", eps, "cover scale (power of two)");
    cmd_cut->add_option("--flest", flest_spec,
                        "l,p',Lambda for the gradient-norm scaling fit");
    cmd_cut->add_option("--flest-samples", flest_samples,
                        "Monte Carlo samples per epsilon");

    auto* cmd_suite = app.add_subcommand(
        "suite", "full verification battery over the example family");
    add_common(cmd_suite, c, false);

    CLI11_PARSE(app, argc, argv);
    CLI::App* active = app.get_subcommands().front();

    try {
        apply_spec(c, active);
        Timer timer;

        if (active == cmd_suite) {
            SuiteOptions opt{c.seed, c.threads};
            const SuiteResult res = run_suite(opt);
            for (const auto& check : res.checks)
                std::cout << (check.passed ? "PASS" : "FAIL") << "  "
                          << check.name << "  [" << check.detail << "]  ("
                          << check.wall_s << "s)\n";
            if (!c.out_path.empty())
                for (const auto& row : res.rows)
                    append_text_file(c.out_path, row.to_jsonl());
            if (!c.csv_path.empty()) {
                append_text_file(c.csv_path, csv_header());
                for (const auto& row : res.rows)
                    append_text_file(c.csv_path, csv_line(row));
            }
            std::cout << (res.all_passed() ? "all checks passed"
                                           : "some checks FAILED")
                      << "\n";
            return res.all_passed() ? 0 : 1;
        }

        const SparsePolynomial f = load_poly(c);
        const Region U = load_region(c, f.num_vars());
        const std::string input = f.to_string() + "|" + std::to_string(c.seed);

        if (active == cmd_int || active == cmd_log) {
            const IntegralVerdict v =
                active == cmd_int
                    ? integrate_grad_log(f, p, U, budget, c.seed, c.threads)
                    : integrate_abs_log(f, p, U, budget, c.seed, c.threads);
            print_verdict(v);
            emit(c, active->get_name(), active->get_name(),
                 input + "|p=" + std::to_string(p), to_json(v), timer.ms());
            return verdict_exit(v.kind);
        }

        if (active == cmd_gamma) {
            const auto r = critical_exponent(f, U, bracket_lo, bracket_hi, tol,
                                             budget, c.seed, c.threads);
            std::cout << "gamma=" << r.gamma << "  bracket=[" << r.bracket_lo
                      << "," << r.bracket_hi << "]"
                      << (r.widened ? "  (stopped on an inconclusive probe)"
                                    : "")
                      << "\n";
            emit(c, "critical-exponent", "critical-exponent", input,
                 to_json(r), timer.ms());
            return r.widened ? 3 : 0;
        }

        if (active == cmd_radial) {
            std::vector<double> omega;
            {
                size_t pos = 0;
                while (pos < omega_text.size()) {
                    size_t next = omega_text.find(',', pos);
                    if (next == std::string::npos) next = omega_text.size();
                    omega.push_back(
                        std::stod(omega_text.substr(pos, next - pos)));
                    pos = next + 1;
                }
            }
            const IntegralVerdict v = radial_blowup_check(f, omega, eps);
            print_verdict(v);
            emit(c, "radial", "radial", input + "|" + omega_text, to_json(v),
                 timer.ms());
            return verdict_exit(v.kind);
        }

        if (active == cmd_exp) {
            const ExponentBudget eb;
            const auto rep = exponent_inequality_report(f, U, eb, c.seed);
            std::cout << "alpha0=" << rep.alpha0.slope
                      << "  beta0=" << rep.beta0.slope
                      << "  alpha_dist=" << rep.alpha_dist.slope
                      << "  margin=" << rep.inequality_margin
                      << (rep.codim_warning ? "  [codim warning]" : "")
                      << (rep.low_confidence ? "  [low confidence]" : "")
                      << "\n";
            emit(c, "exponents", "exponents", input, to_json(rep), timer.ms());
            return rep.inequality_margin >= -0.1 ? 0 : 3;
        }

        if (active == cmd_zero) {
            const auto sample =
                sample_zero_set(f, U, count, residual_tol, c.seed);
            std::cout << zero_sample_csv(sample);
            emit(c, "zeroset", "zeroset", input,
                 json{{"accepted", sample.size()}}, timer.ms());
            return 0;
        }

        if (active == cmd_dim) {
            const auto sample = sample_zero_set(f, U, count, 1e-10, c.seed);
            std::vector<double> box_eps, vol_eps;
            for (int j = 1; j <= eps_levels; ++j)
                box_eps.push_back(std::exp2(-j));
            for (int j = 1; j <= std::min(eps_levels, 5); ++j)
                vol_eps.push_back(std::exp2(-j));
            const auto box = box_dimension(sample, box_eps);
            const auto vol = neighborhood_volume_exponent(
                f, U, sample, vol_eps, 200000, c.seed + 1);
            std::cout << "box_dim=" << box.dim_value
                      << "  volume_dim=" << vol.dim_value << "\n";
            emit(c, "dimension", "dimension", input,
                 json{{"box", to_json(box)}, {"volume", to_json(vol)}},
                 timer.ms());
            return 0;
        }

        if (active == cmd_cut) {
            const auto sample = sample_zero_set(f, U, count, 1e-10, c.seed);
            const auto cover = dyadic_cover_fattened(sample.points, eps);
            std::cout << cover_csv(cover);

            std::vector<double> fl;
            {
                size_t pos = 0;
                while (pos < flest_spec.size()) {
                    size_t next = flest_spec.find(',', pos);
                    if (next == std::string::npos) next = flest_spec.size();
                    fl.push_back(std::stod(flest_spec.substr(pos, next - pos)));
                    pos = next + 1;
                }
            }
            if (fl.size() != 3)
                throw std::runtime_error("--flest expects l,p',Lambda");
            std::vector<double> eps_range;
            for (int j = 2; j <= 6; ++j) eps_range.push_back(std::exp2(-j));
            const auto flest = verify_flest(sample.points, eps_range, fl[0],
                                            fl[1], fl[2], flest_samples,
                                            c.seed + 2);
            std::cout << "# flest slope=" << flest.fit.slope
                      << " bound=" << flest.bound_slope
                      << " r2=" << flest.fit.r_squared << "\n";
            emit(c, "cutoff", "cutoff", input,
                 json{{"cover_cubes", cover.size()}, {"flest", to_json(flest)}},
                 timer.ms());
            return 0;
        }

        throw std::runtime_error("unhandled subcommand");
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
