// =============================================================================
// Unit tests: ratio functionals, grid search, refinement, witnesses
// =============================================================================
// Closed-form ratio values on frozen configurations, sharpness of the grid
// search against the known constants, serial/parallel agreement, analytic
// lower-bound witnesses and the divergence probe.
// =============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>

#include "quadineq/common.hpp"
#include "quadineq/constants.hpp"
#include "quadineq/transforms.hpp"

using namespace quadineq;
using doctest::Approx;

namespace {

// sharp quadruple constant for the power family under power normalization
double sharp_L(double alpha) { return alpha * std::pow(2.0, 2.0 - alpha); }

bool same_params(const ParamFour& x, const ParamFour& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.r == y.r &&
           x.s == y.s && x.t == y.t;
}

}  // namespace

// =============================================================================
// ratio()
// =============================================================================

TEST_CASE("ratio closed forms on the collinear equality configuration") {
    // 3,2,2,1 / 1,1: numerator tau(3)-tau(2)-tau(2)+tau(1)
    QuadConfig cfg{3.0, 2.0, 2.0, 1.0, 1.0, 1.0};

    SUBCASE("L with power normalization attains the alpha=2 constant") {
        auto r = ratio(RatioSpec::power(RatioKind::L, 2.0), cfg);
        REQUIRE(r.has_value());
        CHECK(*r == 2.0);  // (9-4-4+1) / (1 * 1)
    }

    SUBCASE("L with transform-derivative normalization") {
        auto r = ratio(RatioSpec::dtran(RatioKind::L, Transform::power(2.0)),
                       cfg);
        REQUIRE(r.has_value());
        CHECK(*r == 1.0);  // 2 / (1 * tau'(1)) = 2/2
    }

    SUBCASE("K divides by tau at the geometric mean") {
        auto r = ratio(RatioSpec::dtran(RatioKind::K, Transform::power(2.0)),
                       cfg);
        REQUIRE(r.has_value());
        CHECK(*r == 2.0);  // 2 / tau(sqrt(1*1))
    }

    SUBCASE("J divides by tau(qp)+tau(yz)") {
        auto r = ratio(RatioSpec::dtran(RatioKind::J, Transform::power(2.0)),
                       cfg);
        REQUIRE(r.has_value());
        CHECK(*r == 1.0);  // 2 / (1 + 1)
    }
}

TEST_CASE("ratio guards") {
    SUBCASE("quad2 violation is a precondition failure") {
        QuadConfig bad{2.0, 1.0, 1.0, 2.0, 1.0, 1.0};
        CHECK_THROWS_AS(ratio(RatioSpec::power(RatioKind::L, 2.0), bad),
                        domain_error);
    }

    SUBCASE("vanishing denominator gives nullopt, not a value") {
        QuadConfig degenerate{1.0, 1.0, 1.0, 1.0, 0.0, 1.0};
        auto r = ratio(RatioSpec::power(RatioKind::L, 2.0), degenerate);
        CHECK_FALSE(r.has_value());
    }

    SUBCASE("K and J require tau(0)=0") {
        QuadConfig cfg{3.0, 2.0, 2.0, 1.0, 1.0, 1.0};
        CHECK_THROWS_AS(
            ratio(RatioSpec::dtran(RatioKind::K, Transform::constant(1.0)),
                  cfg),
            domain_error);
        CHECK_THROWS_AS(
            ratio(RatioSpec::dtran(RatioKind::J, Transform::constant(1.0)),
                  cfg),
            domain_error);
        // L has no such requirement
        CHECK_NOTHROW(
            ratio(RatioSpec::dtran(RatioKind::L, Transform::constant(1.0)),
                  cfg));
    }

    SUBCASE("power normalization needs a positive exponent") {
        RatioSpec spec;
        spec.kind = RatioKind::L;
        spec.normalization = Normalization::power;
        spec.transform = Transform::power(2.0);
        spec.alpha = 0.0;
        CHECK_THROWS_AS(ratio(spec, QuadConfig{1, 1, 1, 1, 1, 1}),
                        domain_error);
    }

    SUBCASE("a spec without a transform is rejected") {
        RatioSpec spec;
        spec.kind = RatioKind::L;
        CHECK_THROWS_AS(ratio(spec, QuadConfig{1, 1, 1, 1, 1, 1}),
                        domain_error);
    }
}

TEST_CASE("kind and normalization string round trips") {
    CHECK(ratio_kind_from_string("L") == RatioKind::L);
    CHECK(ratio_kind_from_string("K") == RatioKind::K);
    CHECK(ratio_kind_from_string("J") == RatioKind::J);
    CHECK(to_string(RatioKind::J) == "J");
    CHECK(normalization_from_string("dtran") == Normalization::dtran);
    CHECK(normalization_from_string("power") == Normalization::power);
    CHECK(to_string(Normalization::power) == "power");
    CHECK_THROWS_AS(ratio_kind_from_string("M"), domain_error);
    CHECK_THROWS_AS(normalization_from_string("unit"), domain_error);
}

// =============================================================================
// grid search and refinement
// =============================================================================

TEST_CASE("grid search approaches the sharp power-family constants") {
    GridSpec grid{9, 4.0};
    for (double alpha : {1.0, 1.5, 2.0}) {
        RatioSpec spec = RatioSpec::power(RatioKind::L, alpha);
        SearchReport rep = grid_search(spec, grid, 42);
        SearchReport fine = refine_local(spec, rep, 200);

        INFO("alpha = " << alpha);
        // never above the analytic constant...
        CHECK(fine.best_ratio <= sharp_L(alpha) * (1.0 + 1e-9));
        // ...and close below it after refinement
        CHECK(fine.best_ratio >= sharp_L(alpha) - 1e-3);
        CHECK(fine.best_ratio >= rep.best_ratio);
        CHECK(fine.refinement_steps > 0);
    }
}

TEST_CASE("grid search report bookkeeping") {
    GridSpec grid{9, 4.0};
    RatioSpec spec = RatioSpec::power(RatioKind::L, 1.5);
    SearchReport rep = grid_search(spec, grid, 7);

    CHECK(rep.raw_cells == 531441);  // 9^6
    CHECK(rep.grid_points_evaluated > 0);
    CHECK(rep.grid_points_evaluated < rep.raw_cells);
    CHECK(rep.seed == 7);
    CHECK(rep.grid.resolution == 9);
    CHECK(rep.refinement_steps == 0);
    CHECK_FALSE(rep.top_params.empty());
    CHECK(rep.top_params.size() <= 10);
    CHECK(same_params(rep.top_params.front(), rep.best_params));

    // the reported best cell reproduces the reported ratio
    auto r = ratio(spec, rep.best_config);
    REQUIRE(r.has_value());
    CHECK(*r == Approx(rep.best_ratio).epsilon(1e-12));
}

TEST_CASE("serial and parallel searches agree exactly") {
    GridSpec grid{7, 4.0};
    for (RatioKind kind : {RatioKind::L, RatioKind::K, RatioKind::J}) {
        RatioSpec spec = RatioSpec::power(kind, 1.75);
        SearchReport par = grid_search(spec, grid, 42);
        SearchReport ser = grid_search_serial(spec, grid, 42);

        INFO("kind = " << to_string(kind));
        CHECK(par.best_ratio == ser.best_ratio);
        CHECK(same_params(par.best_params, ser.best_params));
        CHECK(par.grid_points_evaluated == ser.grid_points_evaluated);
        CHECK(par.raw_cells == ser.raw_cells);
        REQUIRE(par.top_params.size() == ser.top_params.size());
        for (std::size_t i = 0; i < par.top_params.size(); ++i)
            CHECK(same_params(par.top_params[i], ser.top_params[i]));
    }
}

TEST_CASE("repeated searches are deterministic") {
    GridSpec grid{7, 4.0};
    RatioSpec spec = RatioSpec::power(RatioKind::L, 1.25);
    SearchReport a = refine_local(spec, grid_search(spec, grid, 42), 100);
    SearchReport b = refine_local(spec, grid_search(spec, grid, 42), 100);
    CHECK(a.best_ratio == b.best_ratio);
    CHECK(same_params(a.best_params, b.best_params));
    CHECK(a.refinement_steps == b.refinement_steps);
}

// =============================================================================
// analytic lower bounds
// =============================================================================

TEST_CASE("lower-bound witnesses match their closed forms") {
    SUBCASE("tau_1") {
        auto w = lower_bound_witnesses(Transform::power(1.0), 1.0, 2.0, 0.25);
        REQUIRE(w[0].value.has_value());
        CHECK(std::fabs(*w[0].value - 2.0) <= 1e-10);
        REQUIRE(w[1].value.has_value());
        CHECK(std::fabs(*w[1].value - 1.0) <= 1e-10);
        REQUIRE(w[2].value.has_value());
        CHECK(std::fabs(*w[2].value) <= 1e-10);  // tau' is constant
        REQUIRE(w[3].value.has_value());
        CHECK(std::fabs(*w[3].value - 2.0) <= 1e-10);
    }

    SUBCASE("tau_2") {
        auto w = lower_bound_witnesses(Transform::power(2.0), 1.0, 2.0, 0.25);
        REQUIRE(w[0].value.has_value());
        CHECK(std::fabs(*w[0].value - 1.0) <= 1e-10);
        REQUIRE(w[3].value.has_value());
        CHECK(std::fabs(*w[3].value - 1.0) <= 1e-10);
    }

    SUBCASE("tau_1.5 at u=v gives 2^(2-alpha) on witness (iv)") {
        auto w = lower_bound_witnesses(Transform::power(1.5), 1.0, 1.0, 0.25);
        REQUIRE(w[3].value.has_value());
        CHECK(std::fabs(*w[3].value - std::sqrt(2.0)) <= 1e-10);
    }

    SUBCASE("vanishing denominator reports nullopt") {
        // u=v makes witness (iii) divide by tau'(0), which is 0 for tau_2
        auto w = lower_bound_witnesses(Transform::power(2.0), 1.0, 1.0, 0.25);
        CHECK_FALSE(w[2].value.has_value());
    }

    SUBCASE("audit configurations are attached") {
        auto w = lower_bound_witnesses(Transform::power(2.0), 1.0, 2.0, 0.25);
        CHECK(w[0].config.yq == 1.0);   // triple_line at u
        CHECK(w[1].config.zp == 2.0);   // ray construction at 2u
        CHECK(w[3].config.yz == 3.0);   // collinear_sum: u + v
    }

    SUBCASE("positivity guards") {
        Transform t = Transform::power(2.0);
        CHECK_THROWS_AS(lower_bound_witnesses(t, 0.0, 1.0, 0.25),
                        domain_error);
        CHECK_THROWS_AS(lower_bound_witnesses(t, 1.0, -1.0, 0.25),
                        domain_error);
        CHECK_THROWS_AS(lower_bound_witnesses(t, 1.0, 1.0, 0.0),
                        domain_error);
    }
}

TEST_CASE("unit lower bound and its difference quotient") {
    CHECK(unit_lower_bound(Transform::power(2.0), 1.0) == 1.0);
    CHECK(unit_lower_bound(Transform::huber(1.0), 0.5) == 1.0);

    // (tau(1) - tau(1-eps)) / (eps * tau'(1)) for tau_2 is exactly 1 - eps/2
    double q = unit_lower_bound_quotient(Transform::power(2.0), 1.0, 1e-4);
    CHECK(q == Approx(0.99995).epsilon(1e-10));

    SUBCASE("the quotient sits within 1e-3 of the bound for all built-ins") {
        for (const auto& t : builtin_s0_transforms()) {
            double v = unit_lower_bound_quotient(t, 1.0, 1e-4);
            INFO(t.name());
            CHECK(std::fabs(v - 1.0) <= 1e-3);
        }
    }

    SUBCASE("guards") {
        Transform t = Transform::power(2.0);
        CHECK_THROWS_AS(unit_lower_bound(t, 0.0), domain_error);
        CHECK_THROWS_AS(unit_lower_bound_quotient(t, 1.0, 0.0), domain_error);
        CHECK_THROWS_AS(unit_lower_bound_quotient(t, 1.0, 2.0), domain_error);
        // tau'(u) = 0 at u is rejected rather than divided by
        CHECK_THROWS_AS(unit_lower_bound(Transform::constant(0.0), 1.0),
                        domain_error);
    }
}

// =============================================================================
// divergence probe
// =============================================================================

TEST_CASE("divergence probe on the thin rectangle") {
    SUBCASE("alpha = 2 stays pinned at 1") {
        for (double eps = 1e-1; eps >= 1e-4; eps *= 0.5) {
            auto [k, j] = divergence_probe(2.0, eps);
            CHECK(j <= 1.0 + 1e-12);
            CHECK(j == Approx(1.0).epsilon(1e-9));
            CHECK(k == Approx(2.0 * j).epsilon(1e-15));
        }
    }

    SUBCASE("alpha = 2.5 diverges as eps shrinks") {
        double prev = 0.0;
        for (double eps = 1e-1; eps >= 1e-4; eps *= 0.5) {
            auto [k, j] = divergence_probe(2.5, eps);
            (void)k;
            CHECK(j > prev);
            prev = j;
        }
        auto [k4, j4] = divergence_probe(2.5, 1e-4);
        (void)k4;
        CHECK(j4 > 100.0);
        CHECK(j4 == Approx(125.0).epsilon(1e-4));
    }

    SUBCASE("alpha = 3 frozen value") {
        auto [k, j] = divergence_probe(3.0, 0.1);
        (void)k;
        CHECK(j > 15.03);
        CHECK(j < 15.05);
    }

    SUBCASE("guards") {
        CHECK_THROWS_AS(divergence_probe(2.0, 0.0), domain_error);
        CHECK_THROWS_AS(divergence_probe(Transform::constant(1.0), 0.1),
                        domain_error);
    }
}
