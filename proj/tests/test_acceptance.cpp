// Acceptance gate: one pass/fail line per criterion, nonzero exit when
// any line fails.  Criteria 1 through 11 come from the suite battery;
// criterion 12 re-runs representative experiments and compares their
// serialized payloads byte for byte.

#include <cstdio>
#include <string>

#include "singlab/quadrature.hpp"
#include "singlab/report.hpp"
#include "singlab/suite.hpp"

using namespace singlab;

namespace {

int failures = 0;

void line(int number, const std::string& name, bool passed,
          const std::string& detail) {
    std::printf("[%2d] %-24s %s  %s\n", number, name.c_str(),
                passed ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!passed) ++failures;
}

bool determinism_check() {
    const auto xy = SparsePolynomial::parse("x1*x2");
    const auto aniso = SparsePolynomial::parse("x1^2 + x2^4");
    const Region U = Region::cube(2, -1.0, 1.0);
    const ShellBudget budget{100000, 24};

    const std::string a =
        to_json(integrate_grad_log(xy, 1.1, U, budget, kDefaultSeed, 1)).dump() +
        to_json(integrate_grad_log(aniso, 1.0, U, budget, kDefaultSeed, 4))
            .dump() +
        to_json(critical_exponent(xy, U, 0.5, 1.5, 0.1, budget, kDefaultSeed, 2))
            .dump();
    const std::string b =
        to_json(integrate_grad_log(xy, 1.1, U, budget, kDefaultSeed, 3)).dump() +
        to_json(integrate_grad_log(aniso, 1.0, U, budget, kDefaultSeed, 1))
            .dump() +
        to_json(critical_exponent(xy, U, 0.5, 1.5, 0.1, budget, kDefaultSeed, 5))
            .dump();
    return a == b;
}

}  // namespace

int main() {
    const SuiteResult res = run_suite({kDefaultSeed, 0});
    int number = 1;
    for (const auto& check : res.checks) {
        line(number++, check.name, check.passed,
             check.detail + " (" + std::to_string(check.wall_s) + "s)");
    }
    line(number, "12-determinism", determinism_check(),
         "payloads byte-identical across reruns and thread counts");
    std::printf("%s\n", failures == 0 ? "ACCEPTANCE PASSED"
                                      : "ACCEPTANCE FAILED");
    return failures == 0 ? 0 : 1;
}
