#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quadineq/geometry.hpp"
#include "quadineq/inequalities.hpp"
#include "quadineq/transforms.hpp"

namespace quadineq {

enum class RatioKind { L, K, J };
enum class Normalization { dtran, power };

RatioKind ratio_kind_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);
std::string to_string(RatioKind k);
std::string to_string(Normalization n);

// Which ratio functional to maximize.  normalization dtran divides by the
// transform-derivative terms; normalization power divides by the plain power
// terms of the exponent alpha (the transform itself is still used for the
// numerator and defaults to power(alpha)).
struct RatioSpec {
    RatioKind kind = RatioKind::L;
    Normalization normalization = Normalization::dtran;
    Transform transform;
    double alpha = 0.0;  // required for normalization == power

    static RatioSpec dtran(RatioKind kind, const Transform& t);
    static RatioSpec power(RatioKind kind, double alpha);
};

// Ratio of quad_lhs to the spec's denominator on one configuration.
// Returns nullopt when |denominator| < 1e-12 (degenerate 0/0 cell).
// Precondition: cfg satisfies check_quad2 -> domain_error otherwise.
std::optional<double> ratio(const RatioSpec& spec, const QuadConfig& cfg);

struct GridSpec {
    int resolution = 17;  // points per axis
    double scale = 4.0;   // a,b,c range over (0, scale]
};

struct SearchReport {
    double best_ratio = 0.0;
    QuadConfig best_config;
    ParamFour best_params;
    long long grid_points_evaluated = 0;  // cells where a ratio was computed
    long long raw_cells = 0;              // full grid size before filtering
    int refinement_steps = 0;
    unsigned long long seed = 0;
    GridSpec grid;
    std::vector<ParamFour> top_params;  // best cells, refinement restarts
};

// Exhaustive deterministic grid maximization of the ratio over the
// parametrized configuration space, filtered by the feasibility constraints
// and the quad2 condition.  Identical results for any worker count.
SearchReport grid_search(const RatioSpec& spec, const GridSpec& grid,
                         unsigned long long seed);

// Serial reference implementation with the identical contract, kept for
// testing the parallel kernel against.
SearchReport grid_search_serial(const RatioSpec& spec, const GridSpec& grid,
                                unsigned long long seed);

// Derivative-free local polish (Nelder-Mead) started from the best grid
// cells; never returns a smaller best_ratio.
SearchReport refine_local(const RatioSpec& spec, const SearchReport& report,
                          int iterations);

struct WitnessValue {
    std::optional<double> value;  // nullopt = denominator was zero
    QuadConfig config;            // audit configuration behind the bound
};

// The four analytic lower-bound witnesses (i)-(iv) for the quadruple
// constant of t, evaluated at scales u, v with offset eps used in the
// audit configurations.
std::array<WitnessValue, 4> lower_bound_witnesses(const Transform& t, double u,
                                                  double v, double eps);

// The universal lower bound 1: returns the analytic value and exposes the
// difference quotient (tau(u)-tau(u-eps))/(eps*tau'(u)) whose limit it is.
double unit_lower_bound(const Transform& t, double u);
double unit_lower_bound_quotient(const Transform& t, double u, double eps);

// K and J ratios on the thin-rectangle witness; diverges for power
// exponents above 2 as eps -> 0.
std::pair<double, double> divergence_probe(const Transform& t, double eps);
std::pair<double, double> divergence_probe(double alpha, double eps);

}  // namespace quadineq
