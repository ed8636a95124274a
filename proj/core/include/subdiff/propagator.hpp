#pragma once

#include "subdiff/green_function.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace subdiff {

/// K(x_i, xi_j; t) = D^(alpha-1) G(x, t, xi, 0) on the tensor grid, with the
/// trapezoid weights used to integrate against it in xi.
struct PropagatorKernel {
    double t = 0.0;
    std::size_t n = 0;               // grid intervals; (n+1)^2 entries
    std::vector<double> k;           // row-major: k[i*(n+1)+j] = K(x_i, xi_j; t)
    std::vector<double> xi_weights;  // trapezoid weights for the xi integral
    double mass_max = 0.0;           // max_i sum_j w_j K_ij (mass non-amplification check)

    double at(std::size_t i, std::size_t j) const { return k[i * (n + 1) + j]; }
    /// xi-integration of the kernel against nodal values g_j.
    std::vector<double> apply(std::span<const double> g) const;
};

struct PropagatorConfig {
    int quad_order = 64;      // base Gauss-Jacobi order for the eta integral
    int max_quad_order = 512; // self-check doubling cap
    double quad_check_tol = 1e-7;
    GreenEvalConfig green;    // image-series controls (alpha is set separately)
};

namespace detail {

/// Piecewise-Chebyshev tabulation of w(y) = e^{1,b}_{1,b}(-y) on [0, y_cut];
/// kernel assembly evaluates the same one-argument profile at every
/// (image, node, quadrature) combination, so a table turns the inner loops
/// into O(1) lookups.
class WrightProfileTable {
public:
    explicit WrightProfileTable(double beta);
    double operator()(double y) const; // 0 beyond the cutoff
    double cutoff() const { return y_cut_; }

private:
    struct Segment {
        double lo, hi;
        std::vector<double> cheb; // Chebyshev coefficients on [lo, hi]
    };
    std::vector<Segment> segments_;
    double y_cut_ = 0.0;
};

} // namespace detail

/// Assembles and caches propagator kernels for one problem (fixed alpha and
/// grid). Kernels are Toeplitz-minus-Hankel: K_ij = T(i-j) - T(i+j) with T a
/// per-time profile, so assembly is O(n (M + q)) plus the O(n^2) fill.
class PropagatorAssembler {
public:
    PropagatorAssembler(double alpha, std::size_t n, PropagatorConfig cfg = {});

    /// Kernel at time t, cached per t.
    const PropagatorKernel& at_time(double t);

    /// Uncached assembly with an explicit quadrature order.
    PropagatorKernel assemble(double t, int quad_order) const;

    /// Assembly with the Richardson self-check (doubles the order until two
    /// successive kernels agree to quad_check_tol, up to max_quad_order).
    PropagatorKernel assemble_checked(double t) const;

    /// Quadrature order that passed the self-check at t_ref; cached so that
    /// per-time-level assemblies can skip re-checking.
    int checked_order(double t_ref);

    double alpha() const { return alpha_; }
    std::size_t intervals() const { return n_; }
    const PropagatorConfig& config() const { return cfg_; }
    const detail::WrightProfileTable& wright_table() const { return table_; }

private:
    PropagatorKernel assemble_checked_impl(double t, int& order_out) const;

    double alpha_;
    std::size_t n_;
    PropagatorConfig cfg_;
    detail::WrightProfileTable table_;
    std::map<double, PropagatorKernel> cache_;
    int checked_order_ = 0;
};

/// Convenience one-shot form of the assembly.
PropagatorKernel assemble_propagator(double t, double alpha, std::size_t n,
                                     const PropagatorConfig& cfg = {});

} // namespace subdiff
