#include "singlab/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

double int_pow(double x, std::uint32_t e) {
    double p = 1.0;
    while (e) {
        if (e & 1u) p *= x;
        x *= x;
        e >>= 1u;
    }
    return p;
}

}  // namespace

SparsePolynomial::SparsePolynomial(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 1) throw std::invalid_argument("num_vars must be >= 1");
}

SparsePolynomial::SparsePolynomial(int num_vars, std::vector<Term> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
    if (num_vars < 1) throw std::invalid_argument("num_vars must be >= 1");
    for (const auto& t : terms_) {
        if (static_cast<int>(t.exps.size()) != num_vars_)
            throw std::invalid_argument("exponent vector length mismatch");
    }
    normalize();
}

SparsePolynomial SparsePolynomial::from_rational_terms(
    int num_vars,
    const std::vector<std::pair<std::pair<long long, long long>,
                                std::vector<std::uint32_t>>>& terms) {
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& [ratio, exps] : terms) {
        if (ratio.second == 0) throw std::invalid_argument("zero denominator");
        out.push_back({static_cast<double>(ratio.first) /
                           static_cast<double>(ratio.second),
                       exps});
    }
    return SparsePolynomial(num_vars, std::move(out));
}

void SparsePolynomial::normalize() {
    // Merge duplicates, drop exact zeros, fix a lexicographic term order.
    std::map<std::vector<std::uint32_t>, double> acc;
    for (const auto& t : terms_) acc[t.exps] += t.coeff;
    terms_.clear();
    for (auto& [exps, c] : acc) {
        if (c != 0.0) terms_.push_back({c, exps});
    }
}

std::uint32_t SparsePolynomial::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) {
        std::uint32_t s = 0;
        for (auto e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

std::uint32_t SparsePolynomial::degree_in(int var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exps[var]);
    return d;
}

double SparsePolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

double SparsePolynomial::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != num_vars_)
        throw std::invalid_argument("point dimension does not match num_vars");
    // Neumaier-compensated sum over the fixed term order.
    double sum = 0.0, comp = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (int i = 0; i < num_vars_; ++i) {
            const std::uint32_t e = t.exps[i];
            if (e) v *= int_pow(x[i], e);
        }
        const double s = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - s) + v;
        else
            comp += (v - s) + sum;
        sum = s;
    }
    return sum + comp;
}

SparsePolynomial SparsePolynomial::partial(int var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        const std::uint32_t e = t.exps[var];
        if (e == 0) continue;
        Term d = t;
        d.coeff *= static_cast<double>(e);
        d.exps[var] = e - 1;
        out.push_back(std::move(d));
    }
    return SparsePolynomial(num_vars_, std::move(out));
}

std::vector<SparsePolynomial> SparsePolynomial::gradient() const {
    std::vector<SparsePolynomial> g;
    g.reserve(num_vars_);
    for (int i = 0; i < num_vars_; ++i) g.push_back(partial(i));
    return g;
}

SparsePolynomial SparsePolynomial::scaled(double c) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff *= c;
    return SparsePolynomial(num_vars_, std::move(out));
}

SparsePolynomial SparsePolynomial::restrict_first(
    std::span<const double> xprime) const {
    if (static_cast<int>(xprime.size()) != num_vars_ - 1)
        throw std::invalid_argument("slice dimension must be num_vars - 1");
    std::vector<Term> out;
    for (const auto& t : terms_) {
        double c = t.coeff;
        for (int i = 1; i < num_vars_; ++i) c *= int_pow(xprime[i - 1], t.exps[i]);
        if (c == 0.0) continue;
        std::vector<std::uint32_t> e{t.exps[0]};
        out.push_back({c, std::move(e)});
    }
    return SparsePolynomial(1, std::move(out));
}

std::string SparsePolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << (t.coeff < 0 ? " - " : " + ");
        else if (t.coeff < 0) os << "-";
        first = false;
        const double a = std::abs(t.coeff);
        bool printed = false;
        if (a != 1.0) {
            os << a;
            printed = true;
        }
        for (int i = 0; i < num_vars_; ++i) {
            if (t.exps[i] == 0) continue;
            if (printed) os << "*";
            os << "x" << (i + 1);
            if (t.exps[i] > 1) os << "^" << t.exps[i];
            printed = true;
        }
        if (!printed) os << a;
    }
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("polynomial parse error at position " +
                         std::to_string(pos) + ": " + what);
    }

    double number() {
        skip_ws();
        size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                s[end] == 'e' || s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos &&
                 (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        if (end == pos) fail("expected a number");
        double v = 0.0;
        try {
            v = std::stod(s.substr(pos, end - pos));
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos = end;
        return v;
    }

    std::uint32_t integer() {
        skip_ws();
        size_t end = pos;
        while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
        if (end == pos) fail("expected an integer");
        const unsigned long v = std::stoul(s.substr(pos, end - pos));
        pos = end;
        return static_cast<std::uint32_t>(v);
    }

    // term := factor (['*'] factor)*, factor := number | xK['^'e]
    void term(std::map<std::vector<std::uint32_t>, double>& acc, int& max_var,
              double sign) {
        double coeff = sign;
        std::map<int, std::uint32_t> exps;
        bool any = false;
        for (;;) {
            skip_ws();
            if (pos >= s.size()) break;
            const char c = s[pos];
            if (c == 'x' || c == 'X') {
                ++pos;
                const int var = static_cast<int>(integer());
                if (var < 1) fail("variable index must be >= 1");
                std::uint32_t e = 1;
                if (accept('^')) e = integer();
                exps[var - 1] += e;
                max_var = std::max(max_var, var);
                any = true;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                coeff *= number();
                any = true;
            } else if (c == '*') {
                ++pos;
                continue;
            } else {
                break;
            }
            accept('*');
        }
        if (!any) fail("empty term");
        std::vector<std::uint32_t> key(max_var > 0 ? max_var : 0);
        // Keys are widened to the final dimension after parsing; store sparse here.
        std::vector<std::uint32_t> packed;
        int top = 0;
        for (auto& [v, e] : exps) top = std::max(top, v + 1);
        packed.assign(top, 0);
        for (auto& [v, e] : exps) packed[v] = e;
        acc[packed] += coeff;
    }
};

}  // namespace

SparsePolynomial SparsePolynomial::parse(const std::string& text, int min_vars) {
    Parser p(text);
    std::map<std::vector<std::uint32_t>, double> acc;
    int max_var = 0;
    double sign = 1.0;
    p.skip_ws();
    if (p.accept('-')) sign = -1.0;
    else p.accept('+');
    for (;;) {
        p.term(acc, max_var, sign);
        p.skip_ws();
        if (p.pos >= p.s.size()) break;
        if (p.accept('+')) sign = 1.0;
        else if (p.accept('-')) sign = -1.0;
        else p.fail("expected '+' or '-' between terms");
    }
    const int n = std::max(std::max(max_var, min_vars), 1);
    std::vector<Term> terms;
    for (auto& [exps, c] : acc) {
        std::vector<std::uint32_t> full(n, 0);
        std::copy(exps.begin(), exps.end(), full.begin());
        terms.push_back({c, std::move(full)});
    }
    return SparsePolynomial(n, std::move(terms));
}

double UnivariateRestriction::eval(double rho) const {
    // Horner.
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * rho + *it;
    return v;
}

UnivariateRestriction UnivariateRestriction::derivative() const {
    UnivariateRestriction d;
    d.direction = direction;
    if (coeffs.size() <= 1) {
        d.coeffs = {0.0};
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (size_t k = 1; k < coeffs.size(); ++k)
        d.coeffs[k - 1] = coeffs[k] * static_cast<double>(k);
    return d;
}

UnivariateRestriction restrict_to_ray(const SparsePolynomial& f,
                                      std::span<const double> omega) {
    if (static_cast<int>(omega.size()) != f.num_vars())
        throw std::invalid_argument("direction dimension mismatch");
    double norm2 = 0.0;
    for (double w : omega) norm2 += w * w;
    if (norm2 == 0.0) throw std::invalid_argument("zero direction vector");
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
        throw std::invalid_argument("direction must be a unit vector");

    UnivariateRestriction phi;
    phi.direction.assign(omega.begin(), omega.end());
    phi.coeffs.assign(f.total_degree() + 1, 0.0);
    for (const auto& t : f.terms()) {
        std::uint32_t deg = 0;
        double c = t.coeff;
        for (int i = 0; i < f.num_vars(); ++i) {
            deg += t.exps[i];
            for (std::uint32_t e = 0; e < t.exps[i]; ++e) c *= omega[i];
        }
        phi.coeffs[deg] += c;
    }
    return phi;
}

std::optional<int> vanishing_order(const UnivariateRestriction& phi) {
    double maxc = 0.0;
    for (double c : phi.coeffs) maxc = std::max(maxc, std::abs(c));
    if (maxc == 0.0) return std::nullopt;
    const double tol = 1e-14 * maxc;
    for (size_t k = 0; k < phi.coeffs.size(); ++k)
        if (std::abs(phi.coeffs[k]) > tol) return static_cast<int>(k);
    return std::nullopt;
}

}  // namespace singlab
