#pragma once

#include "subdiff/green_function.hpp"
#include "subdiff/grid.hpp"
#include "subdiff/propagator.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace subdiff {

/// The nonlocal problem: d_t^alpha u = u_xx + f on (0,1) x (0,T],
/// u(0,t) = u(1,t) = 0, and u(x,0) = g(x, u(x,T)).
struct ProblemSpec {
    double alpha = 0.5;
    double T = 1.0;
    std::function<double(double, double)> f; // f(x, t)
    std::function<double(double, double)> g; // g(x, w)
    double lipschitz = 0.0;                  // Lipschitz constant of g in w

    void validate() const;
};

struct NumericsConfig {
    std::size_t nx = 64;
    std::size_t nt = 64;
    int quad_order = 64;        // base order for the weighted quadratures
    int max_quad_order = 1024;  // doubling cap for the Richardson self-checks
    double quad_check_tol = 1e-7;
    int image_cutoff = 8;
    double tail_tol = 1e-12;
    double tol = 1e-10; // fixed-point stopping tolerance (sup norm)
    int max_iterations = 200;
    bool attempt_anyway = false; // run the iteration even when the gate fails
    int spectral_modes = 128;    // reference-solver mode count
    int envelope_density = 8;    // envelope scan samples per decade
};

/// Contraction bookkeeping of the fixed-point iteration.
struct ContractionReport {
    double delta = 0.0;         // C L T^(-a/2) Gamma(a/2)/Gamma(1-a/2)
    double delta_theorem = 0.0; // variant with T^(1-a/2) in place of T^(-a/2)
    double C_used = 0.0;
    std::vector<double> increments;      // sup-norm steps |v_{n+1} - v_n|
    std::vector<double> observed_ratios; // increments[n]/increments[n-1]
    bool gate_passed = false;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    double aposteriori_bound = 0.0; // delta/(1-delta) * final increment
};

struct FixedPointResult {
    GridFunction v;
    ContractionReport report;
};

/// Residuals of a candidate solution against the problem statement.
struct ResidualRecord {
    double pde_max = 0.0;      // Caputo(u) - u_xx - f, interior, t >= t_min
    double boundary_max = 0.0; // max |u(0,.)|, |u(1,.)|
    double nonlocal_max = 0.0; // max |u(.,0) - g(., u(.,T))|
    double t_min_checked = 0.0;
};

struct SolutionBundle {
    GridFunction v;
    SpaceTimeField u;
    ContractionReport report;
    ResidualRecord residuals;
};

/// delta = C L T^(-alpha/2) Gamma(alpha/2) / Gamma(1 - alpha/2): the
/// contraction constant from the derivation chain. The solver gates on this
/// form.
double contraction_delta(double L, double alpha, double T, double C);

/// Gate variant with T^(1-alpha/2): the theorem-statement form. The two
/// disagree in the exponent of T; both are reported.
double contraction_delta_theorem_form(double L, double alpha, double T, double C);

/// Sup-norm a-priori bound (2C/alpha) T^(alpha/2)
/// exp(L T^(-alpha/2) Gamma(alpha/2)/Gamma(1-alpha/2)) max|f|; valid as a
/// bound only when g(x,0) = 0.
double apriori_sup_bound(double L, double alpha, double T, double C, double max_abs_f);

/// Orchestrates one problem instance: owns the propagator assembler, the
/// envelope constant, and the quadrature orders fixed by the self-checks.
class NonlocalSolver {
public:
    NonlocalSolver(ProblemSpec spec, NumericsConfig cfg);

    /// Final-time trace of the source-driven part of the solution:
    /// F(x) = int_0^T int_0^1 G(x,T,xi,tau) f(xi,tau) d xi d tau.
    const GridFunction& source_term_trace();

    /// Numerically estimated envelope constant used in delta.
    double envelope_constant();

    ContractionReport gate_report();

    /// Banach iteration v_{n+1} = K g(., v_n) + F from v_0 = F.
    /// Throws GateError when delta >= 1 unless attempt_anyway is set.
    FixedPointResult fixed_point_solve(std::optional<GridFunction> v0 = std::nullopt);

    /// Full field u(x,t) from a converged trace; the t = 0 row is a
    /// two-point Richardson extrapolation in t^alpha (kernel is singular at
    /// t = 0).
    SpaceTimeField reconstruct_u(const GridFunction& v);

    /// Whole pipeline: F, fixed point, reconstruction, residuals.
    SolutionBundle solve();

    /// F evaluated at an arbitrary time (used by the reconstruction).
    std::vector<double> source_term_at(double t);

    const ProblemSpec& problem() const { return spec_; }
    const NumericsConfig& numerics() const { return cfg_; }
    PropagatorAssembler& assembler() { return assembler_; }

private:
    void probe_lipschitz_constant();
    int source_quad_order();

    ProblemSpec spec_;
    NumericsConfig cfg_;
    PropagatorAssembler assembler_;
    std::optional<double> envelope_C_;
    std::optional<GridFunction> F_;
    int f_quad_order_ = 0;
    bool lipschitz_checked_ = false;
};

/// Free-function forms of the solver operations.
GridFunction compute_F(const ProblemSpec& spec, const NumericsConfig& cfg);
FixedPointResult fixed_point_solve(const ProblemSpec& spec, const NumericsConfig& cfg);
SpaceTimeField reconstruct_u(const GridFunction& v, const ProblemSpec& spec,
                             const NumericsConfig& cfg);
SolutionBundle solve_nonlocal(const ProblemSpec& spec, const NumericsConfig& cfg);

/// Residuals of the field against the PDE, boundary and nonlocal conditions.
/// The PDE residual skips t < max(3 dt, 0.05 T) where the L1 stencil has no
/// accuracy to offer.
ResidualRecord verify_regularity(const SpaceTimeField& u, const ProblemSpec& spec);

} // namespace subdiff
