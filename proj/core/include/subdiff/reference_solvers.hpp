#pragma once

#include "subdiff/grid.hpp"
#include "subdiff/solver.hpp"

#include <functional>

namespace subdiff {

/// Forward (auxiliary) problem: d_t^alpha u = u_xx + f, u(x,0) = phi,
/// homogeneous Dirichlet data.
struct ForwardProblem {
    double alpha = 0.5;
    double T = 1.0;
    GridFunction phi;                        // initial profile on [0,1]
    std::function<double(double, double)> f; // f(x,t)

    void validate() const; // phi must vanish at both ends (compatibility)
};

/// Implicit finite-difference solver: L1 in time, centred second difference
/// in space, Thomas solve per step. O(dt^(2-alpha) + dx^2).
SpaceTimeField fd_forward_solve(const ForwardProblem& p, std::size_t nt);

/// Sine-series Duhamel solver:
///   u_k(t) = phi_k E_alpha(-lambda_k t^alpha)
///          + int_0^t (t-s)^(alpha-1) E_{alpha,alpha}(-lambda_k (t-s)^alpha) f_k(s) ds.
/// Exact in space for band-limited data.
SpaceTimeField spectral_forward_solve(const ForwardProblem& p, std::size_t nt, int modes);

/// Brute-force realisation of the nonlocal fixed point entirely through
/// forward solves: phi_{n+1}(x) = g(x, solve(phi_n)(x, T)). Shares no
/// numerical path with the Green-function pipeline beyond the special
/// functions. Returns the converged final-time trace.
struct OracleResult {
    GridFunction v;
    int iterations = 0;
    bool converged = false;
    double final_increment = 0.0;
};
OracleResult nonlocal_oracle_solve(const ProblemSpec& spec, const NumericsConfig& cfg);

} // namespace subdiff
