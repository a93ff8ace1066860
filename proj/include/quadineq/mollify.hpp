#pragma once

// Numeric kernels behind mollified transforms.  The derivative of the base
// transform is convolved with a compactly supported bump in the
// multiplicative group (log domain); the mollified function itself is
// recovered by integrating that derivative from zero.

#include <vector>

#include "quadineq/transforms.hpp"

namespace quadineq::moll {

// Integral of exp(-1/(1-u^2)) over [-1,1] computed with the same rule that
// evaluates the convolution, so the bump normalizes to exactly 1 under it.
double bump_norm(int quadrature_order);

// tau_n'(y): Gauss-Legendre on the bump support, split at the images of the
// base transform's kinks so each piece is smooth.
double mollified_deriv1(const Transform& base, int n, int quadrature_order,
                        double y);

// tau_n(x) = tau0 + integral of tau_n' from 0 to x (adaptive Simpson).
double mollified_eval(const Transform& base, int n, int quadrature_order,
                      double x, double tau0);

// Same, for a whole sorted grid in one cumulative pass.
std::vector<double> mollified_eval_grid(const Transform& base, int n,
                                        int quadrature_order,
                                        const std::vector<double>& xs,
                                        double tau0);

// Compares the convolution at the requested order against a halved order at
// a few probe points; throws numeric_error when they disagree.
void validate_quadrature(const Transform& base, int n, int quadrature_order);

}  // namespace quadineq::moll
