#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "singlab/rng.hpp"

namespace singlab {

// Axis-aligned box in R^n.
struct Region {
    std::vector<double> lo;
    std::vector<double> hi;

    Region() = default;
    Region(std::vector<double> lo_, std::vector<double> hi_)
        : lo(std::move(lo_)), hi(std::move(hi_)) {
        validate();
    }

    static Region cube(int n, double a, double b) {
        return Region(std::vector<double>(n, a), std::vector<double>(n, b));
    }

    // Comma-separated per-axis bounds: "lo1,hi1,lo2,hi2,...".
    static Region parse(const std::string& text);

    int dim() const { return static_cast<int>(lo.size()); }

    double volume() const {
        double v = 1.0;
        for (size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    bool contains(std::span<const double> x) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }

    void sample(Rng& rng, std::vector<double>& out) const {
        out.resize(lo.size());
        for (size_t i = 0; i < lo.size(); ++i) out[i] = rng.uniform(lo[i], hi[i]);
    }

    void validate() const {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("region bounds mismatch");
        for (size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i]))
                throw std::invalid_argument("region requires lo < hi on every axis");
    }
};

inline Region Region::parse(const std::string& text) {
    std::vector<double> vals;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        vals.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (vals.size() < 2 || vals.size() % 2 != 0)
        throw std::invalid_argument("region text must list lo,hi pairs");
    std::vector<double> lo, hi;
    for (size_t i = 0; i < vals.size(); i += 2) {
        lo.push_back(vals[i]);
        hi.push_back(vals[i + 1]);
    }
    return Region(std::move(lo), std::move(hi));
}

}  // namespace singlab
