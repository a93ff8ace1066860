#include "quadineq/mollify.hpp"

#include <algorithm>
#include <cmath>

#include "quadineq/quadrature.hpp"

namespace quadineq::moll {

namespace {

double bump(double u) {
    if (std::fabs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace

double bump_norm(int quadrature_order) {
    return gauss_legendre(quadrature_order).integrate(bump, -1.0, 1.0);
}

// tau_n'(y) = int_{-1}^{1} bump(u)/Z * tau'(y * exp(-u/n)) du.
// Kinks of tau' at y*exp(-u/n) = bp map to u* = n*log(y/bp); the integral is
// split there so Gauss-Legendre sees smooth pieces only.
double mollified_deriv1(const Transform& base, int n, int quadrature_order,
                        double y) {
    const auto& rule = gauss_legendre(quadrature_order);
    const double z = bump_norm(quadrature_order);
    auto f = [&](double u) { return bump(u) * base.deriv(y * std::exp(-u / n), 1); };

    std::vector<double> cuts{-1.0, 1.0};
    if (y > 0.0) {
        for (double bp : base.breakpoints()) {
            if (bp <= 0.0) continue;
            double u = n * std::log(y / bp);
            if (u > -1.0 && u < 1.0) cuts.push_back(u);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += rule.integrate(f, cuts[i], cuts[i + 1]);
    return acc / z;
}

double mollified_eval(const Transform& base, int n, int quadrature_order,
                      double x, double tau0) {
    if (x == 0.0) return tau0;
    auto d1 = [&](double y) {
        return mollified_deriv1(base, n, quadrature_order, y);
    };
    return tau0 + adaptive_simpson(d1, 0.0, x, 1e-8);
}

std::vector<double> mollified_eval_grid(const Transform& base, int n,
                                        int quadrature_order,
                                        const std::vector<double>& xs,
                                        double tau0) {
    auto d1 = [&](double y) {
        return mollified_deriv1(base, n, quadrature_order, y);
    };
    std::vector<double> out(xs.size());
    double acc = tau0;
    double prev = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > prev) {
            acc += adaptive_simpson(d1, prev, xs[i], 1e-8);
            prev = xs[i];
        }
        out[i] = acc;
    }
    return out;
}

void validate_quadrature(const Transform& base, int n, int quadrature_order) {
    int half = std::max(8, quadrature_order / 2);
    for (double y : {0.1, 0.5, 1.0, 3.0}) {
        double a = mollified_deriv1(base, n, quadrature_order, y);
        double b = mollified_deriv1(base, n, half, y);
        double scale = std::fmax(1.0, std::fabs(a));
        if (std::fabs(a - b) > 1e-6 * scale)
            throw numeric_error(
                "mollify: quadrature did not converge between orders for " +
                base.name());
    }
}

}  // namespace quadineq::moll
