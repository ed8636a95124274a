#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace subdiff {

/// Nodes/weights for int_0^1 (1-u)^a u^b f(u) du (Gauss-Jacobi, exact for
/// polynomial f up to degree 2*order - 1).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;
};

/// Golub-Welsch construction; a, b > -1.
QuadRule gauss_jacobi(int order, double a, double b);

/// Legendre rule on [0,1] (Jacobi with a = b = 0).
QuadRule gauss_legendre(int order);

/// Weighted quadrature of int_0^t (t-eta)^w1 * eta^w2 * smooth(eta) d eta,
/// both endpoint singularities absorbed into the weight. Exponents must be
/// > -1 (DomainError otherwise).
double singular_double_weight_quad(double w1_exp, double w2_exp,
                                   const std::function<double(double)>& smooth,
                                   double t, int order = 32);

/// Composite trapezoid weights for n+1 uniform nodes with the given spacing.
std::vector<double> trapezoid_weights(std::size_t npoints, double spacing);

} // namespace subdiff
