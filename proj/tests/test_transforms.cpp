// =============================================================================
// Unit tests: transform catalogue
// =============================================================================
// Closed-form values, derivative consistency against finite differences,
// class-membership checks, JSON/spec round trips, zero-limit extension.
// =============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "quadineq/common.hpp"
#include "quadineq/rng.hpp"
#include "quadineq/transforms.hpp"

using namespace quadineq;
using doctest::Approx;

// =============================================================================
// Closed-form values
// =============================================================================

TEST_CASE("power transform values and derivatives") {
    Transform t = Transform::power(1.5);
    CHECK(t.eval(0.0) == 0.0);
    CHECK(t.eval(4.0) == Approx(8.0).epsilon(1e-15));
    CHECK(t.deriv(4.0, 1) == Approx(3.0).epsilon(1e-15));  // 1.5 * 4^0.5
    CHECK(t.deriv(1.0, 2) == Approx(0.75).epsilon(1e-15));
    CHECK(t.deriv(1.0, 3) == Approx(-0.375).epsilon(1e-15));

    SUBCASE("alpha=1 second derivative is exactly zero, even at x=0") {
        Transform lin = Transform::power(1.0);
        CHECK(lin.deriv(0.0, 2) == 0.0);
        CHECK(lin.deriv(0.5, 2) == 0.0);
        CHECK(lin.deriv(0.5, 3) == 0.0);
    }

    SUBCASE("alpha=2 third derivative is exactly zero") {
        Transform sq = Transform::power(2.0);
        CHECK(sq.deriv(0.7, 3) == 0.0);
        CHECK(sq.deriv(0.7, 2) == 2.0);
    }

    SUBCASE("invalid exponent") {
        CHECK_THROWS_AS(Transform::power(0.0), domain_error);
        CHECK_THROWS_AS(Transform::power(-1.0), domain_error);
    }
}

TEST_CASE("huber transform: quadratic core, linear tail") {
    Transform t = Transform::huber(1.0);
    CHECK(t.eval(0.5) == Approx(0.125).epsilon(1e-15));
    CHECK(t.eval(2.0) == Approx(1.5).epsilon(1e-15));  // 1*2 - 1/2
    CHECK(t.deriv(0.5, 1) == Approx(0.5).epsilon(1e-15));
    CHECK(t.deriv(3.0, 1) == Approx(1.0).epsilon(1e-15));
    CHECK(t.smoothness_order() == 1);
    REQUIRE(t.breakpoints().size() == 1);
    CHECK(t.breakpoints()[0] == 1.0);

    SUBCASE("closed second derivative is unavailable, FD fallback works") {
        CHECK_THROWS_AS(t.deriv(0.5, 2), capability_error);
        CHECK(t.deriv(0.5, 2, true) == Approx(1.0).epsilon(1e-6));
        CHECK(std::fabs(t.deriv(3.0, 2, true)) <= 1e-6);
    }
}

TEST_CASE("pseudo-huber and log-cosh values") {
    Transform ph = Transform::pseudo_huber(1.0);
    // delta^2 (sqrt(1+(x/delta)^2) - 1)
    CHECK(ph.eval(1.0) == Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK(ph.eval(0.0) == 0.0);
    CHECK(ph.deriv(1.0, 1) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    Transform lc = Transform::log_cosh();
    CHECK(lc.eval(1.0) == Approx(std::log(std::cosh(1.0))).epsilon(1e-15));
    CHECK(lc.eval(0.0) == 0.0);
    CHECK(lc.deriv(1.0, 1) == Approx(std::tanh(1.0)).epsilon(1e-15));
    // large argument: log(cosh x) = x - log 2 + tiny, must not overflow
    CHECK(lc.eval(800.0) == Approx(800.0 - std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("linear, constant and weighted sums") {
    Transform lin = Transform::linear();
    CHECK(lin.eval(3.25) == 3.25);
    CHECK(lin.deriv(3.25, 1) == 1.0);
    CHECK(lin.deriv(3.25, 2) == 0.0);

    Transform cst = Transform::constant(2.0);
    CHECK(cst.eval(0.0) == 2.0);
    CHECK(cst.eval(7.0) == 2.0);
    CHECK(cst.deriv(7.0, 1) == 0.0);
    CHECK_FALSE(cst.claims().zero_at_zero);
    CHECK(Transform::constant(0.0).claims().zero_at_zero);

    SUBCASE("weighted sum evaluates termwise and intersects claims") {
        Transform w = Transform::weighted_sum(
            {{2.0, Transform::power(2.0)}, {1.0, Transform::huber(1.0)}});
        CHECK(w.eval(2.0) == Approx(2.0 * 4.0 + 1.5).epsilon(1e-15));
        CHECK(w.smoothness_order() == 1);  // huber limits the order
        CHECK(w.claims().zero_at_zero);
        REQUIRE(w.breakpoints().size() == 1);
        CHECK(w.breakpoints()[0] == 1.0);

        Transform shifted = Transform::weighted_sum(
            {{1.0, Transform::linear()}, {1.0, Transform::constant(1.0)}});
        CHECK_FALSE(shifted.claims().zero_at_zero);
    }

    SUBCASE("weighted sum input validation") {
        CHECK_THROWS_AS(Transform::weighted_sum({}), domain_error);
        CHECK_THROWS_AS(
            Transform::weighted_sum({{-1.0, Transform::linear()}}),
            domain_error);
    }
}

TEST_CASE("domain guards on evaluation") {
    Transform t = Transform::power(1.5);
    CHECK_THROWS_AS(t.eval(-0.1), domain_error);
    CHECK_THROWS_AS(t.deriv(-0.1, 1), domain_error);
    CHECK_THROWS_AS(t.deriv(1.0, 4), domain_error);
    CHECK_THROWS_AS(t.deriv(1.0, 0), domain_error);
    Transform empty;
    CHECK_FALSE(empty.valid());
    CHECK_THROWS_AS(empty.eval(1.0), domain_error);
}

// =============================================================================
// Derivatives vs central differences
// =============================================================================

namespace {

double central_diff(const Transform& t, double x, int order, double h) {
    if (order == 1) return (t.eval(x + h) - t.eval(x - h)) / (2.0 * h);
    return (t.deriv(x + h, order - 1) - t.deriv(x - h, order - 1)) / (2.0 * h);
}

bool near_breakpoint(const Transform& t, double x) {
    for (double b : t.breakpoints())
        if (std::fabs(x - b) < 1e-3 * std::fmax(1.0, b)) return true;
    return false;
}

}  // namespace

TEST_CASE("closed-form derivatives agree with finite differences") {
    for (const auto& t : builtin_s0_transforms()) {
        SplitMix64 rng(7);
        int checked = 0;
        for (int i = 0; checked < 100 && i < 1000; ++i) {
            double x = 0.05 + 3.95 * rng.next_double();
            if (near_breakpoint(t, x)) continue;
            ++checked;
            for (int order = 1; order <= t.smoothness_order(); ++order) {
                double h = std::cbrt(1e-16) * x;
                double fd = central_diff(t, x, order, h);
                double cl = t.deriv(x, order);
                double err =
                    std::fabs(fd - cl) / std::fmax(1.0, std::fabs(cl));
                INFO(t.name() << " order " << order << " at x=" << x);
                CHECK(err <= 1e-6);
            }
        }
        CHECK(checked == 100);
    }
}

// =============================================================================
// Class membership
// =============================================================================

TEST_CASE("built-in transforms verify their claims on a wide log grid") {
    std::vector<double> grid = log_grid(1e-4, 1e4, 1000);
    for (const auto& t : builtin_s0_transforms()) {
        MembershipReport r = check_membership(t, grid);
        INFO(t.name() << " worst violation " << r.worst_violation << " at "
                      << r.worst_point);
        CHECK(r.nondecreasing_ok);
        CHECK(r.convex_ok);
        CHECK(r.concave_deriv_ok);
        CHECK(r.zero_at_zero_ok);
        CHECK(r.all_ok());
    }
}

TEST_CASE("membership detects genuine violations") {
    std::vector<double> grid = log_grid(1e-2, 1e2, 400);

    SUBCASE("cubic power has a convex derivative") {
        MembershipReport r = check_membership(Transform::power(3.0), grid);
        CHECK(r.nondecreasing_ok);
        CHECK(r.convex_ok);
        CHECK_FALSE(r.concave_deriv_ok);
        CHECK(r.worst_violation > 0.0);
    }

    SUBCASE("square root is not convex") {
        MembershipReport r = check_membership(Transform::power(0.5), grid);
        CHECK(r.nondecreasing_ok);
        CHECK_FALSE(r.convex_ok);
    }

    SUBCASE("nonzero constant fails the zero-at-zero claim") {
        MembershipReport r = check_membership(Transform::constant(1.0), grid);
        CHECK_FALSE(r.zero_at_zero_ok);
        CHECK(r.nondecreasing_ok);
    }

    SUBCASE("claims of the power family match the membership verdicts") {
        for (double alpha : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
            Transform t = Transform::power(alpha);
            MembershipReport r = check_membership(t, grid);
            INFO("alpha " << alpha);
            CHECK(r.nondecreasing_ok == t.claims().nondecreasing);
            CHECK(r.convex_ok == t.claims().convex);
            CHECK(r.concave_deriv_ok == t.claims().concave_derivative);
        }
    }
}

// =============================================================================
// Zero extension
// =============================================================================

TEST_CASE("extend_zero recovers value and derivative limits at 0") {
    auto [v15, d15] = Transform::power(1.5).extend_zero();
    CHECK(std::fabs(v15) <= 1e-12);
    CHECK(std::fabs(d15) <= 1e-9);

    auto [vh, dh] = Transform::huber(1.0).extend_zero();
    CHECK(std::fabs(vh) <= 1e-12);
    CHECK(std::fabs(dh) <= 1e-9);

    auto [vl, dl] = Transform::linear().extend_zero();
    CHECK(std::fabs(vl) <= 1e-12);
    CHECK(dl == Approx(1.0).epsilon(1e-9));

    auto [vc, dc] = Transform::constant(2.0).extend_zero();
    CHECK(vc == Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(dc) <= 1e-9);
}

// =============================================================================
// Serialization
// =============================================================================

TEST_CASE("JSON and text spec round trips") {
    std::vector<Transform> ts = {
        Transform::power(1.25),  Transform::huber(0.5),
        Transform::pseudo_huber(2.0), Transform::log_cosh(),
        Transform::linear(),     Transform::constant(3.0),
        mollify(Transform::power(1.5), 4),
    };
    for (const auto& t : ts) {
        Transform back = Transform::from_json(t.to_json());
        INFO(t.name());
        CHECK(back.name() == t.name());
        for (double x : {0.0, 0.3, 1.0, 2.7})
            CHECK(back.eval(x) == Approx(t.eval(x)).epsilon(1e-12));
    }

    SUBCASE("text specs") {
        CHECK(Transform::parse("power(1.5)").eval(4.0) == Approx(8.0));
        CHECK(Transform::parse("huber(2)").breakpoints()[0] == 2.0);
        CHECK(Transform::parse("log_cosh").name() == "log_cosh");
        CHECK(Transform::parse("linear").eval(5.0) == 5.0);
        CHECK(Transform::parse("constant(3)").eval(0.0) == 3.0);
        // a JSON object is accepted directly
        CHECK(Transform::parse("{\"kind\":\"power\",\"alpha\":2.0}").eval(3.0) ==
              9.0);
    }

    SUBCASE("malformed specs throw") {
        CHECK_THROWS_AS(Transform::parse(""), domain_error);
        CHECK_THROWS_AS(Transform::parse("power"), domain_error);
        CHECK_THROWS_AS(Transform::parse("power(abc)"), domain_error);
        CHECK_THROWS_AS(Transform::parse("frobnicate(1)"), domain_error);
        CHECK_THROWS_AS(Transform::from_json(nlohmann::json{{"kind", "nope"}}),
                        domain_error);
    }
}

// =============================================================================
// Grid evaluation
// =============================================================================

TEST_CASE("eval_grid matches pointwise evaluation") {
    std::vector<double> xs = log_grid(1e-3, 20.0, 64);
    for (const auto& t : builtin_s0_transforms()) {
        auto g = t.eval_grid(xs);
        REQUIRE(g.size() == xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(g[i] == Approx(t.eval(xs[i])).epsilon(1e-12));
    }
    CHECK_THROWS_AS(Transform::linear().eval_grid({1.0, 0.5}), domain_error);
}
