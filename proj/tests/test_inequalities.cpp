// =============================================================================
// Unit tests: quadruple inequalities and related checks
// =============================================================================
// quad2 / quadtran on frozen configs and random Euclidean corpora, the
// symmetric variant, parallelogram, Ptolemy, roundness, Karamata and the
// right-hand-side bound chain.
// =============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "quadineq/common.hpp"
#include "quadineq/geometry.hpp"
#include "quadineq/inequalities.hpp"
#include "quadineq/rng.hpp"
#include "quadineq/transforms.hpp"

using namespace quadineq;
using doctest::Approx;

namespace {

QuadConfig random_euclidean(unsigned long long seed, unsigned long long i) {
    auto rng = stream_at(seed, i);
    std::vector<std::vector<double>> pts(4);
    for (auto& p : pts)
        p = {rng.next_normal(), rng.next_normal(), rng.next_normal()};
    return config_from_euclidean_points(pts[0], pts[1], pts[2], pts[3]);
}

}  // namespace

// =============================================================================
// quad2
// =============================================================================

TEST_CASE("quad2 on frozen configurations") {
    SUBCASE("collinear points give equality") {
        // y,z,q,p at 3,1,0,1 along a line: lhs 9-4-4+1 = 2 = 2*1*1
        QuadConfig cfg{3.0, 2.0, 2.0, 1.0, 1.0, 1.0};
        CheckResult r = check_quad2(cfg);
        CHECK(r.holds);
        CHECK(r.lhs == 2.0);
        CHECK(r.rhs == 2.0);
        CHECK(r.margin == 0.0);
    }

    SUBCASE("a violating configuration is reported") {
        QuadConfig cfg{2.0, 1.0, 1.0, 2.0, 1.0, 1.0};
        CheckResult r = check_quad2(cfg);
        CHECK_FALSE(r.holds);
        CHECK(r.lhs == 6.0);  // 4-1-1+4
        CHECK(r.rhs == 2.0);
        CHECK(r.margin < 0.0);
    }

    SUBCASE("negative distances are rejected") {
        CHECK_THROWS_AS(check_quad2(QuadConfig{-1, 1, 1, 1, 1, 1}),
                        domain_error);
    }
}

TEST_CASE("quad2 and quadtran hold on a random Euclidean corpus") {
    auto builtins = builtin_s0_transforms();
    for (int i = 0; i < 20000; ++i) {
        QuadConfig cfg = random_euclidean(42, static_cast<unsigned long long>(i));
        CheckResult q2 = check_quad2(cfg);
        REQUIRE(q2.holds);
        for (const auto& t : builtins) {
            CheckResult r = check_quadtran(t, cfg, 2.0);
            if (!(r.holds && r.margin >= -1e-9)) {
                INFO(t.name() << " sample " << i << " margin " << r.margin);
                REQUIRE(r.holds);
            }
        }
    }
}

TEST_CASE("quadtran left side matches the transform arithmetic") {
    Transform t = Transform::power(1.5);
    QuadConfig cfg{3.0, 2.0, 2.0, 1.0, 1.0, 1.5};
    double expect = std::pow(3.0, 1.5) - std::pow(2.0, 1.5) -
                    std::pow(2.0, 1.5) + 1.0;
    CHECK(quad_lhs(t, cfg) == Approx(expect).epsilon(1e-14));

    CheckResult r = check_quadtran(t, cfg, 2.0);
    CHECK(r.rhs ==
          Approx(2.0 * cfg.qp * t.deriv(cfg.yz, 1)).epsilon(1e-14));
    CHECK(r.holds);

    SUBCASE("the constant scales the right side") {
        CheckResult tight = check_quadtran(t, cfg, 0.1);
        CHECK(tight.rhs == Approx(0.1 * cfg.qp * t.deriv(cfg.yz, 1))
                               .epsilon(1e-14));
    }
}

// =============================================================================
// symmetric variant
// =============================================================================

TEST_CASE("symmetric inequality on the Euclidean corpus") {
    auto builtins = builtin_s0_transforms();
    for (int i = 0; i < 20000; ++i) {
        QuadConfig cfg = random_euclidean(43, static_cast<unsigned long long>(i));
        for (const auto& t : builtins) {
            CheckResult r = check_symmetric(t, cfg);
            if (!r.holds) {
                INFO(t.name() << " sample " << i << " margin " << r.margin);
                REQUIRE(r.holds);
            }
        }
    }
}

TEST_CASE("symmetric right side is tau(qp) + tau(yz)") {
    Transform t = Transform::huber(1.0);
    QuadConfig cfg{3.0, 2.0, 2.0, 1.0, 1.0, 1.5};
    CheckResult r = check_symmetric(t, cfg);
    CHECK(r.rhs == Approx(t.eval(1.0) + t.eval(1.5)).epsilon(1e-14));
    CHECK(r.lhs == Approx(quad_lhs(t, cfg)).epsilon(1e-14));
}

// =============================================================================
// parallelogram
// =============================================================================

TEST_CASE("parallelogram inequality") {
    SUBCASE("tau_2 satisfies it with equality") {
        for (int i = 0; i < 20000; ++i) {
            auto rng = stream_at(44, static_cast<unsigned long long>(i));
            double u[3], v[3];
            for (auto& x : u) x = rng.next_normal();
            for (auto& x : v) x = rng.next_normal();
            double un = 0, vn = 0, sn = 0, dn = 0;
            for (int k = 0; k < 3; ++k) {
                un += sqr(u[k]);
                vn += sqr(v[k]);
                sn += sqr(u[k] + v[k]);
                dn += sqr(u[k] - v[k]);
            }
            CheckResult r = check_parallelogram(
                Transform::power(2.0), std::sqrt(un), std::sqrt(vn),
                std::sqrt(sn), std::sqrt(dn));
            REQUIRE(r.holds);
            REQUIRE(std::fabs(r.margin) <= 1e-10);
        }
    }

    SUBCASE("huber on orthogonal unit vectors") {
        // |u| = |v| = 1, |u+v| = |u-v| = sqrt(2):
        // lhs = 2*(sqrt(2) - 1/2), rhs = 4*(1/2) = 2
        double s2 = std::sqrt(2.0);
        CheckResult r =
            check_parallelogram(Transform::huber(1.0), 1.0, 1.0, s2, s2);
        CHECK(r.holds);
        CHECK(r.lhs == Approx(2.0 * (s2 - 0.5)).epsilon(1e-14));
        CHECK(r.rhs == 2.0);
    }

    SUBCASE("all built-ins satisfy it on random Euclidean vectors") {
        auto builtins = builtin_s0_transforms();
        for (int i = 0; i < 4000; ++i) {
            auto rng = stream_at(45, static_cast<unsigned long long>(i));
            double u[3], v[3];
            for (auto& x : u) x = rng.next_normal();
            for (auto& x : v) x = rng.next_normal();
            double un = 0, vn = 0, sn = 0, dn = 0;
            for (int k = 0; k < 3; ++k) {
                un += sqr(u[k]);
                vn += sqr(v[k]);
                sn += sqr(u[k] + v[k]);
                dn += sqr(u[k] - v[k]);
            }
            for (const auto& t : builtins) {
                CheckResult r =
                    check_parallelogram(t, std::sqrt(un), std::sqrt(vn),
                                        std::sqrt(sn), std::sqrt(dn));
                INFO(t.name() << " sample " << i);
                REQUIRE(r.holds);
            }
        }
    }

    SUBCASE("requires tau(0)=0") {
        CHECK_THROWS_AS(
            check_parallelogram(Transform::constant(1.0), 1, 1, 2, 0),
            domain_error);
    }
}

// =============================================================================
// Ptolemy and roundness
// =============================================================================

TEST_CASE("classical Ptolemy holds on the Euclidean corpus") {
    for (int i = 0; i < 20000; ++i) {
        QuadConfig cfg = random_euclidean(46, static_cast<unsigned long long>(i));
        CheckResult r = check_ptolemy(cfg);
        REQUIRE(r.holds);
    }

    SUBCASE("the alternative printed form is generically false") {
        // regular simplex: 1*1 + 1*1 = 2 > 1*1
        QuadConfig simplex{1, 1, 1, 1, 1, 1};
        CheckResult printed = check_ptolemy(simplex, PtolemyForm::as_printed);
        CHECK_FALSE(printed.holds);
        CHECK(check_ptolemy(simplex, PtolemyForm::classical).holds);

        // the unit square sits exactly on the boundary of the printed form
        QuadConfig sq = witness_config(WitnessFamily{"square", {{"x", 1.0}}});
        CheckResult boundary = check_ptolemy(sq, PtolemyForm::as_printed);
        CHECK(std::fabs(boundary.margin) <= 1e-12);
    }
}

TEST_CASE("roundness exponent 2 coincides with the symmetric power bound") {
    for (int i = 0; i < 20000; ++i) {
        QuadConfig cfg = random_euclidean(47, static_cast<unsigned long long>(i));
        CheckResult r = check_roundness(cfg, 2.0);
        REQUIRE(r.holds);
    }
    CHECK_THROWS_AS(check_roundness(QuadConfig{1, 1, 1, 1, 1, 1}, 0.0),
                    domain_error);
}

// =============================================================================
// Karamata
// =============================================================================

TEST_CASE("karamata prefix-dominance check") {
    Transform f = Transform::power(2.0);

    SUBCASE("a textbook majorization pair") {
        KaramataResult r = check_karamata(f, {2.0, 1.0, 1.0}, {3.0, 1.0, 0.5});
        CHECK(r.applicable);
        CHECK(r.check.holds);  // 4+1+1 <= 9+1+0.25
    }

    SUBCASE("prefix dominance failing disables the check") {
        KaramataResult r = check_karamata(f, {3.0, 0.0}, {2.0, 2.0});
        CHECK_FALSE(r.applicable);
    }

    SUBCASE("unsorted input is rejected") {
        CHECK_THROWS_AS(check_karamata(f, {1.0, 2.0}, {2.0, 2.0}),
                        domain_error);
        CHECK_THROWS_AS(check_karamata(f, {2.0, 1.0}, {1.0, 2.0}),
                        domain_error);
        CHECK_THROWS_AS(check_karamata(f, {}, {}), domain_error);
        CHECK_THROWS_AS(check_karamata(f, {1.0}, {1.0, 2.0}), domain_error);
    }

    SUBCASE("transform must claim convexity") {
        CHECK_THROWS_AS(check_karamata(Transform::power(0.5), {1.0}, {2.0}),
                        domain_error);
    }

    SUBCASE("applicable pairs always pass for convex nondecreasing built-ins") {
        long long applicable = 0;
        const long long n = 20000;
        for (long long i = 0; i < n; ++i) {
            auto rng = stream_at(48, static_cast<unsigned long long>(i));
            std::vector<double> a(4), b(4);
            for (auto& x : a) x = 4.0 * rng.next_double();
            for (auto& x : b) x = 4.0 * rng.next_double();
            std::sort(a.rbegin(), a.rend());
            std::sort(b.rbegin(), b.rend());
            for (const auto& t :
                 {Transform::power(2.0), Transform::power(1.5),
                  Transform::huber(1.0)}) {
                KaramataResult r = check_karamata(t, a, b);
                if (r.applicable) {
                    INFO("sample " << i);
                    REQUIRE(r.check.holds);
                }
            }
            if (check_karamata(f, a, b).applicable) ++applicable;
        }
        // seeded corpus: the rate is deterministic and sizeable
        CHECK(applicable > n / 10);
        CHECK(applicable < n);
    }
}

// =============================================================================
// Right-hand-side bound chain
// =============================================================================

TEST_CASE("bound chain frozen values") {
    SUBCASE("tau_2 at qp=1, yz=2") {
        auto v = rhs_bound_chain(Transform::power(2.0), 1.0, 2.0, 0.5);
        CHECK(v[0] == Approx(8.0).epsilon(1e-14));
        CHECK(v[3] == Approx(8.0).epsilon(1e-14));
        CHECK(v[4] == Approx(9.0).epsilon(1e-14));
        CHECK(v[5] == Approx(8.0).epsilon(1e-14));
        CHECK(v[6] == Approx(9.0).epsilon(1e-14));
        CHECK(v[7] == Approx(10.0).epsilon(1e-14));
    }

    SUBCASE("tau_1 at qp=yz=1") {
        auto v = rhs_bound_chain(Transform::power(1.0), 1.0, 1.0, 0.0);
        CHECK(v[0] == Approx(2.0).epsilon(1e-14));
        CHECK(v[7] == Approx(4.0).epsilon(1e-14));
    }

    SUBCASE("input validation") {
        Transform t = Transform::power(2.0);
        CHECK_THROWS_AS(rhs_bound_chain(t, -1.0, 1.0, 0.5), domain_error);
        CHECK_THROWS_AS(rhs_bound_chain(t, 1.0, 1.0, 1.5), domain_error);
        CHECK_THROWS_AS(rhs_bound_chain(Transform::constant(1.0), 1, 1, 0.5),
                        domain_error);
    }
}

TEST_CASE("bound chain orderings on a grid") {
    const double tol = 1e-10;
    for (const auto& t : builtin_s0_transforms()) {
        for (int iq = 1; iq <= 12; ++iq) {
            for (int iy = 1; iy <= 12; ++iy) {
                double qp = iq / 3.0, yz = iy / 3.0;
                for (int ib = 0; ib <= 10; ++ib) {
                    double beta = ib / 10.0;
                    auto v = rhs_bound_chain(t, qp, yz, beta);
                    double scale = std::fmax(1.0, std::fabs(v[7]));
                    INFO(t.name() << " qp=" << qp << " yz=" << yz
                                  << " beta=" << beta);
                    REQUIRE(v[0] <= v[1] + tol * scale);
                    REQUIRE(v[1] <= v[2] + tol * scale);
                    REQUIRE(v[3] <= v[5] + tol * scale);
                    REQUIRE(v[5] <= v[7] + tol * scale);
                    REQUIRE(v[4] <= v[6] + tol * scale);
                    REQUIRE(v[6] <= v[7] + tol * scale);
                }
            }
        }
    }
}
