#pragma once

// Shared error types and small numeric helpers used across the library.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace quadineq {

// Thrown when an input is outside a function's mathematical domain
// (negative distance, transform evaluated at x < 0, malformed config, ...).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a requested operation is not available for a transform
// (e.g. a closed-form third derivative of a kinked transform).
struct capability_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Thrown when a quadrilateral parametrization cannot be realized as a
// metric configuration.  `constraint_index` identifies the violated
// constraint: 0/1/2 are the triangle-type parameter constraints, 3 means
// a squared distance came out negative beyond rounding tolerance.
struct construction_error : std::runtime_error {
    int constraint_index;
    construction_error(const std::string& msg, int idx)
        : std::runtime_error(msg), constraint_index(idx) {}
};

// Thrown when a numeric procedure fails to stabilize (limits, quadrature).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a search or sampling procedure finds nothing to work with
// (empty feasible grid, rejection rate too high, failed experiment).
struct search_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Relative/absolute comparison tolerance used by all inequality checks:
// tol = max(rel * max(|lhs|, |rhs|, 1), abs_floor).
inline double check_tolerance(double lhs, double rhs, double rel = 1e-9,
                              double abs_floor = 1e-12) {
    double scale = std::fmax(std::fmax(std::fabs(lhs), std::fabs(rhs)), 1.0);
    return std::fmax(rel * scale, abs_floor);
}

inline double sqr(double x) { return x * x; }

}  // namespace quadineq
