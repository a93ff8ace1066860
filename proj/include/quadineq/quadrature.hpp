#pragma once

// Quadrature helpers: Gauss-Legendre rules of arbitrary order (nodes found
// by Newton iteration on the Legendre recurrence, cached per order) and an
// adaptive Simpson integrator for outer integrals.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "quadineq/common.hpp"

namespace quadineq {

struct GaussLegendre {
    std::vector<double> node;    // on (-1, 1)
    std::vector<double> weight;

    explicit GaussLegendre(int n) : node(n), weight(n) {
        for (int i = 0; i < n; ++i) {
            // Chebyshev-based initial guess for the i-th root of P_n.
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                // Evaluate P_n(x) and P_n'(x) via the three-term recurrence.
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    int order() const { return static_cast<int>(node.size()); }

    // Integrate f over [a, b] with the fixed rule.
    template <typename F>
    double integrate(F&& f, double a, double b) const {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < node.size(); ++i)
            acc += weight[i] * f(mid + half * node[i]);
        return acc * half;
    }
};

// Cached rule lookup; rules are immutable once built.
inline const GaussLegendre& gauss_legendre(int order) {
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussLegendre>(order);
    return *slot;
}

inline const GaussLegendre& gl64() { return gauss_legendre(64); }

namespace detail {
template <typename F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double rtol, double abs_floor,
                    int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0)
        throw numeric_error("adaptive Simpson: recursion depth exhausted");
    double scale = std::fmax(std::fabs(left + right), abs_floor);
    if (std::fabs(delta) <= 15.0 * rtol * scale)
        return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, rtol, abs_floor,
                        depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, rtol, abs_floor,
                        depth - 1);
}
}  // namespace detail

// Adaptive Simpson on [a, b] with relative tolerance rtol.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rtol = 1e-8,
                        double abs_floor = 1e-14, int max_depth = 48) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b);
    double m = 0.5 * (a + b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, rtol, abs_floor,
                                max_depth);
}

}  // namespace quadineq
