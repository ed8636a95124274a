#include "subdiff/quadrature.hpp"

#include "subdiff/errors.hpp"
#include "subdiff/special_functions.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <tuple>

namespace subdiff {

namespace {

// Recurrence coefficients for monic Jacobi polynomials on [-1,1] with
// weight (1-x)^a (1+x)^b (Gautschi's r_jacobi).
void jacobi_recurrence(int n, double a, double b, std::vector<double>& alpha,
                       std::vector<double>& beta) {
    alpha.resize(n);
    beta.resize(n);
    const double ab = a + b;
    alpha[0] = (b - a) / (ab + 2.0);
    // beta[0] holds the zeroth moment of the weight
    beta[0] = std::pow(2.0, ab + 1.0) * beta_fn(a + 1.0, b + 1.0);
    for (int k = 1; k < n; ++k) {
        const double k2ab = 2.0 * k + ab;
        alpha[k] = (b * b - a * a) / (k2ab * (k2ab + 2.0));
        if (k == 1) {
            beta[k] = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            beta[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) /
                      (k2ab * k2ab * (k2ab + 1.0) * (k2ab - 1.0));
        }
    }
}

} // namespace

QuadRule gauss_jacobi(int order, double a, double b) {
    if (order < 1) throw DomainError("gauss_jacobi: order must be positive");
    if (!(a > -1.0) || !(b > -1.0))
        throw DomainError("gauss_jacobi: weight exponents must exceed -1 (divergent integral)");

    std::vector<double> alpha, beta;
    jacobi_recurrence(order, a, b, alpha, beta);

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 0; k < order; ++k) {
        J(k, k) = alpha[k];
        if (k + 1 < order) {
            const double off = std::sqrt(beta[k + 1]);
            J(k, k + 1) = off;
            J(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);

    QuadRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double mu0 = beta[0];
    const double scale = std::pow(0.5, a + b + 1.0);
    for (int k = 0; k < order; ++k) {
        // map from [-1,1] to [0,1]
        rule.nodes[k] = 0.5 * (1.0 + es.eigenvalues()(k));
        const double v0 = es.eigenvectors()(0, k);
        rule.weights[k] = scale * mu0 * v0 * v0;
    }
    return rule;
}

QuadRule gauss_legendre(int order) { return gauss_jacobi(order, 0.0, 0.0); }

double singular_double_weight_quad(double w1_exp, double w2_exp,
                                   const std::function<double(double)>& smooth,
                                   double t, int order) {
    if (!(w1_exp > -1.0) || !(w2_exp > -1.0))
        throw DomainError("singular_double_weight_quad: exponent <= -1 diverges");
    if (!(t > 0.0)) throw DomainError("singular_double_weight_quad: t must be positive");

    // memoised rules: the solver calls this with a handful of (a,b,order)
    thread_local std::map<std::tuple<double, double, int>, QuadRule> cache;
    auto key = std::make_tuple(w1_exp, w2_exp, order);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(order, w1_exp, w2_exp)).first;
    const QuadRule& rule = it->second;

    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        acc += rule.weights[q] * smooth(t * rule.nodes[q]);
    return std::pow(t, w1_exp + w2_exp + 1.0) * acc;
}

std::vector<double> trapezoid_weights(std::size_t npoints, double spacing) {
    std::vector<double> w(npoints, spacing);
    if (npoints >= 1) {
        w.front() = 0.5 * spacing;
        w.back() = 0.5 * spacing;
    }
    return w;
}

} // namespace subdiff
