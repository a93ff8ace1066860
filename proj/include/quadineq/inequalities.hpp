#pragma once

#include <array>
#include <vector>

#include "quadineq/geometry.hpp"
#include "quadineq/transforms.hpp"

namespace quadineq {

struct CheckResult {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    double tolerance_used = 0.0;
};

// tau(yq) - tau(yp) - tau(zq) + tau(zp), the left side shared by all the
// quadruple inequalities.
double quad_lhs(const Transform& t, const QuadConfig& cfg);

// Quadratic diagonal condition: yq^2 - yp^2 - zq^2 + zp^2 <= 2*qp*yz.
CheckResult check_quad2(const QuadConfig& cfg);

// Quadruple inequality with constant L: quad_lhs <= L * qp * tau'(yz).
CheckResult check_quadtran(const Transform& t, const QuadConfig& cfg,
                           double L);

// Symmetric form: quad_lhs <= tau(qp) + tau(yz).  Requires tau(0)=0.
CheckResult check_symmetric(const Transform& t, const QuadConfig& cfg);

// Parallelogram generalization on vector norms:
// tau(|u+v|) + tau(|u-v|) <= 2 tau(|u|) + 2 tau(|v|).
CheckResult check_parallelogram(const Transform& t, double u_norm,
                                double v_norm, double sum_norm,
                                double diff_norm);

enum class PtolemyForm { classical, as_printed };

// classical: yq*zp <= yp*zq + qp*yz.  as_printed keeps both products on the
// left (yq*zp + yp*zq <= qp*yz), which fails already on the regular simplex;
// it is exposed for comparison only.
CheckResult check_ptolemy(const QuadConfig& cfg,
                          PtolemyForm form = PtolemyForm::classical);

// Power roundness: yq^a - yp^a - zq^a + zp^a <= qp^a + yz^a.
CheckResult check_roundness(const QuadConfig& cfg, double alpha);

struct KaramataResult {
    bool applicable = false;  // prefix-sum dominance held
    CheckResult check;        // meaningful only when applicable
};

// Weak-majorization form of Karamata: both lists sorted descending; if every
// prefix sum of a is <= the matching prefix sum of b, then for nondecreasing
// convex f, sum f(a_i) <= sum f(b_i).
KaramataResult check_karamata(const Transform& f, const std::vector<double>& a,
                              const std::vector<double>& b);

// The eight right-hand-side upper bounds for tau(qp)+tau(yz)-style terms,
// in their documented order (i)..(viii).
std::array<double, 8> rhs_bound_chain(const Transform& t, double qp, double yz,
                                      double beta);

}  // namespace quadineq
