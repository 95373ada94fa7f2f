#pragma once

#include <stdexcept>
#include <string>

namespace singlab {

// Thrown when every sampled value of |f| is below the underflow floor.
struct FunctionVanishes : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when too few dyadic shells are statistically resolved to fit a tail.
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the critical-exponent search when the endpoints do not bracket.
struct BadBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when zero-set descent accepts too few points.
struct EmptyAfterBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a ray restriction is identically zero.
struct DegenerateRay : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a 1D slice of f vanishes identically.
struct DegenerateSlice : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace singlab
