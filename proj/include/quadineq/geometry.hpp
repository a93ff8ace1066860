#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadineq/common.hpp"

namespace quadineq {

// Six pairwise distances of a labeled quadruple (y, z, q, p).
struct QuadConfig {
    double yq = 0, yp = 0, zq = 0, zp = 0, qp = 0, yz = 0;

    std::array<double, 6> as_array() const { return {yq, yp, zq, zp, qp, yz}; }
};

// Exchanging the pair (y,z) with (q,p) relabels the distances but leaves the
// quadruple inequalities' left side and the qp*yz product unchanged.
QuadConfig exchanged(const QuadConfig& cfg);

nlohmann::json config_to_json(const QuadConfig& cfg);
QuadConfig config_from_json(const nlohmann::json& j);

// Side lengths a=zp, c=yp, b=qp and the cosines r, s, t of the angles at p
// (r between pz and pq, s between py and pq, t between py and pz).
struct ParamFour {
    double a = 0, b = 0, c = 0;
    double r = 0, s = 0, t = 0;
};

nlohmann::json param_to_json(const ParamFour& p);
ParamFour param_from_json(const nlohmann::json& j);

struct ConstraintReport {
    bool ok = true;
    double margin = 0.0;   // min over the constraints of rhs - lhs
    int worst_index = -1;  // constraint attaining the margin
};

// Triangle with sides a = |py|... returns (yp, qp, yq) where yp=a, qp=b and
// yq closes the triangle with cosine s at p.
std::array<double, 3> three_point(double a, double b, double s);

// The three feasibility inequalities of the 4-point parametrization.
ConstraintReport check_param_constraints(const ParamFour& p);

// Builds the six distances from the parametrization; throws
// construction_error with the violated constraint index (3 = radicand) if
// the parameters are infeasible.
QuadConfig four_point(const ParamFour& p);

// Inverts four_point: reads (a,b,c) off the config and solves the cosines.
// Degenerate side products make a cosine indeterminate -> domain_error.
ParamFour param_from_config(const QuadConfig& cfg);

struct MetricReport {
    bool ok = true;
    double margin = 0.0;  // min slack over nonnegativity + 12 triangle checks
    std::string worst;    // label of the binding check, e.g. "yq<=yp+qp"
};

MetricReport validate_metric(const QuadConfig& cfg);

QuadConfig config_from_euclidean_points(const std::vector<double>& y,
                                        const std::vector<double>& z,
                                        const std::vector<double>& q,
                                        const std::vector<double>& p);

// Named witness constructions.  Parameters are given by name; missing ones
// take the documented defaults.
struct WitnessFamily {
    std::string family;
    std::map<std::string, double> params;
};

QuadConfig witness_config(const WitnessFamily& w);

std::vector<std::string> witness_family_names();

// Parameter names in canonical order plus their default values.
std::vector<std::pair<std::string, double>> witness_default_params(
    const std::string& family);

nlohmann::json witness_to_json(const WitnessFamily& w);
WitnessFamily witness_from_json(const nlohmann::json& j);

}  // namespace quadineq
