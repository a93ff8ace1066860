#pragma once

// The transform registry: nondecreasing convex functions with concave
// derivative (and their relatives), closed-form derivatives up to order 3
// where available, class-membership checks, zero-limits, linear
// combinations, and mollification.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadineq/common.hpp"

namespace quadineq {

enum class TransformKind {
    power,
    huber,
    pseudo_huber,
    log_cosh,
    linear,
    constant,
    sum,
    mollified,
};

// Structural properties a transform claims for itself.  Checks verify the
// claims numerically; nothing is trusted blindly.
struct Claims {
    bool nondecreasing = false;
    bool convex = false;
    bool concave_derivative = false;
    bool zero_at_zero = false;
};

struct MembershipReport {
    bool nondecreasing_ok = true;
    bool convex_ok = true;
    bool concave_deriv_ok = true;
    bool zero_at_zero_ok = true;
    double worst_violation = 0.0;  // largest normalized violation seen
    double worst_point = 0.0;      // where it occurred

    bool all_ok() const {
        return nondecreasing_ok && convex_ok && concave_deriv_ok &&
               zero_at_zero_ok;
    }
};

class Transform {
  public:
    Transform() = default;  // empty; build via factories

    static Transform power(double alpha);
    static Transform huber(double delta);
    static Transform pseudo_huber(double delta);
    static Transform log_cosh();
    static Transform linear();
    static Transform constant(double value);
    // a1*t1 + a2*t2 (see also free function scale_and_add)
    static Transform weighted_sum(std::vector<std::pair<double, Transform>> parts);
    static Transform mollified(const Transform& base, int n,
                               int quadrature_order = 64);

    bool valid() const { return impl_ != nullptr; }

    // tau(x); rejects x < 0 with a domain error.
    double eval(double x) const;
    long double eval_ld(long double x) const;

    // Closed-form derivative of the given order (1..3) when available;
    // nested central differences when fd_fallback is set.
    double deriv(double x, int order, bool fd_fallback = false) const;
    long double deriv1_ld(long double x) const;

    const std::string& name() const;
    TransformKind kind() const;
    const Claims& claims() const;
    int smoothness_order() const;     // highest closed-form derivative order
    std::vector<double> breakpoints() const;  // kink locations, if any

    // (tau(0+), tau'(0+)) as stabilized limits along a descending sequence.
    std::pair<double, double> extend_zero() const;

    // Evaluate on a sorted nonnegative grid.  Mollified transforms compute
    // the whole grid in one cumulative integration pass.
    std::vector<double> eval_grid(const std::vector<double>& xs) const;

    nlohmann::json to_json() const;
    static Transform from_json(const nlohmann::json& j);
    // Accepts "power(1.5)", "huber(1)", "log_cosh", ... or a JSON object.
    static Transform parse(const std::string& text);

  private:
    struct Impl;
    explicit Transform(std::shared_ptr<const Impl> impl)
        : impl_(std::move(impl)) {}
    const Impl& impl() const;
    std::shared_ptr<const Impl> impl_;
};

// a1*t1 + a2*t2 with nonnegative weights; (0,0) collapses to constant 0.
Transform scale_and_add(const Transform& t1, double a1, const Transform& t2,
                        double a2);

// Midpoint convexity / derivative-concavity / monotonicity tests on a
// strictly positive sorted grid.  Reports, never throws on failure.
MembershipReport check_membership(const Transform& t,
                                  const std::vector<double>& grid,
                                  double rel_tol = 1e-9);

// Smoothed transform: the derivative is convolved with a C-infinity bump in
// the multiplicative group, the function recovered by integration.
Transform mollify(const Transform& t, int n, int quadrature_order = 64);

// Built-in instances used by property suites: members of S0 with default
// parameters.
std::vector<Transform> builtin_s0_transforms();

// Log-spaced grid in [lo, hi] with n points.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace quadineq
