#include "subdiff/reference_solvers.hpp"

#include "subdiff/errors.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace subdiff {

namespace {

constexpr double kPi = std::numbers::pi;

// Tridiagonal solve for the constant-coefficient system
// (b) u_i - r (u_{i-1} - 2 u_i ... ) assembled by the caller as (lower, diag,
// upper); Dirichlet rows are handled before the call.
void thomas_solve(std::vector<double>& diag, std::vector<double>& rhs, double lower,
                  double upper) {
    const std::size_t n = diag.size();
    // forward sweep
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower / diag[i - 1];
        diag[i] -= m * upper;
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper * rhs[i + 1]) / diag[i];
}

} // namespace

void ForwardProblem::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("ForwardProblem: alpha must lie in (0,1)");
    if (!(T > 0.0)) throw DomainError("ForwardProblem: T must be positive");
    if (phi.size() < 3) throw DomainError("ForwardProblem: initial profile too coarse");
    if (std::fabs(phi.values().front()) > 1e-12 || std::fabs(phi.values().back()) > 1e-12)
        throw DomainError("ForwardProblem: initial profile must vanish at the boundary");
    if (!f) throw DomainError("ForwardProblem: source term not set");
}

SpaceTimeField fd_forward_solve(const ForwardProblem& p, std::size_t nt) {
    p.validate();
    const std::size_t nx = p.phi.intervals();
    const double dx = p.phi.spacing();
    const double dt = p.T / static_cast<double>(nt);
    const double alpha = p.alpha;

    SpaceTimeField u;
    u.x_nodes = p.phi.nodes();
    u.t_nodes = linspace(nt, p.T);
    u.values.assign((nx + 1) * (nt + 1), 0.0);
    for (std::size_t i = 0; i <= nx; ++i) u.at(i, 0) = p.phi[i];

    // L1 weights b_k = (k+1)^(1-alpha) - k^(1-alpha)
    std::vector<double> b(nt);
    for (std::size_t k = 0; k < nt; ++k)
        b[k] = std::pow(static_cast<double>(k + 1), 1.0 - alpha) -
               std::pow(static_cast<double>(k), 1.0 - alpha);

    const double d0 = 1.0 / (gamma_fn(2.0 - alpha) * std::pow(dt, alpha)); // b_0 coeff
    const double r = 1.0 / (dx * dx);

    std::vector<double> diag(nx - 1), rhs(nx - 1);
    for (std::size_t m = 1; m <= nt; ++m) {
        const double t = m * dt;
        for (std::size_t i = 1; i < nx; ++i) {
            // history sum with compensated accumulation
            double acc = 0.0, comp = 0.0;
            for (std::size_t k = 1; k < m; ++k) {
                const double term = b[k] * (u.at(i, m - k) - u.at(i, m - k - 1));
                const double y = term - comp;
                const double s = acc + y;
                comp = (s - acc) - y;
                acc = s;
            }
            rhs[i - 1] = d0 * (u.at(i, m - 1) - acc) + p.f(u.x_nodes[i], t);
            diag[i - 1] = d0 + 2.0 * r;
        }
        thomas_solve(diag, rhs, -r, -r);
        for (std::size_t i = 1; i < nx; ++i) u.at(i, m) = rhs[i - 1];
        u.at(0, m) = 0.0;
        u.at(nx, m) = 0.0;
    }
    return u;
}

SpaceTimeField spectral_forward_solve(const ForwardProblem& p, std::size_t nt, int modes) {
    p.validate();
    if (modes < 1) throw DomainError("spectral_forward_solve: need at least one mode");
    const std::size_t nx = p.phi.intervals();
    const double dt = p.T / static_cast<double>(nt);
    const double alpha = p.alpha;

    // Sine coefficients of phi by the discrete sine transform (exact for
    // profiles band-limited to the grid).
    const int K = std::min<int>(modes, static_cast<int>(nx) - 1);
    std::vector<double> phik(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        double acc = 0.0;
        for (std::size_t i = 1; i < nx; ++i)
            acc += p.phi[i] * std::sin(k * kPi * p.phi.nodes()[i]);
        phik[static_cast<std::size_t>(k)] = 2.0 * acc * p.phi.spacing();
    }

    // Duhamel with the weight (t-s)^(alpha-1) absorbed into a Jacobi rule:
    //   u_k(t) = phi_k E_a(-l t^a) + t^a sum_q W_q E_{a,a}(-l (t-s_q)^a) f_k(s_q).
    const QuadRule rule = gauss_jacobi(64, alpha - 1.0, 0.0);
    const QuadRule xi_rule = gauss_legendre(96); // mode projections of f

    // sin tables for the projection and synthesis sums
    const std::size_t nq = xi_rule.nodes.size();
    std::vector<double> sin_proj(static_cast<std::size_t>(K + 1) * nq);
    for (int k = 1; k <= K; ++k)
        for (std::size_t j = 0; j < nq; ++j)
            sin_proj[static_cast<std::size_t>(k) * nq + j] =
                std::sin(k * kPi * xi_rule.nodes[j]);

    SpaceTimeField u;
    u.x_nodes = p.phi.nodes();
    u.t_nodes = linspace(nt, p.T);
    u.values.assign((nx + 1) * (nt + 1), 0.0);
    for (std::size_t i = 0; i <= nx; ++i) u.at(i, 0) = p.phi[i];

    std::vector<double> uk(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<double> fq(nq);
    std::vector<double> fk(static_cast<std::size_t>(K) + 1);
    for (std::size_t m = 1; m <= nt; ++m) {
        const double t = m * dt;
        const double ta = std::pow(t, alpha);
        for (int k = 1; k <= K; ++k) {
            const double lam = (k * kPi) * (k * kPi);
            uk[static_cast<std::size_t>(k)] =
                phik[static_cast<std::size_t>(k)] * mittag_leffler({alpha, 1.0}, -lam * ta);
        }
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = t * rule.nodes[q];
            const double sp = t - s;
            for (std::size_t j = 0; j < nq; ++j) fq[j] = xi_rule.weights[j] * p.f(xi_rule.nodes[j], s);
            for (int k = 1; k <= K; ++k) {
                double acc = 0.0;
                const double* row = sin_proj.data() + static_cast<std::size_t>(k) * nq;
                for (std::size_t j = 0; j < nq; ++j) acc += fq[j] * row[j];
                fk[static_cast<std::size_t>(k)] = 2.0 * acc;
            }
            const double spa = std::pow(sp, alpha);
            for (int k = 1; k <= K; ++k) {
                const double lam = (k * kPi) * (k * kPi);
                uk[static_cast<std::size_t>(k)] +=
                    ta * rule.weights[q] * mittag_leffler({alpha, alpha}, -lam * spa) *
                    fk[static_cast<std::size_t>(k)];
            }
        }
        for (std::size_t i = 1; i < nx; ++i) {
            double acc = 0.0;
            for (int k = K; k >= 1; --k)
                acc += uk[static_cast<std::size_t>(k)] * std::sin(k * kPi * u.x_nodes[i]);
            u.at(i, m) = acc;
        }
    }
    return u;
}

OracleResult nonlocal_oracle_solve(const ProblemSpec& spec, const NumericsConfig& cfg) {
    spec.validate();
    const std::size_t nx = cfg.nx;
    const double h = 1.0 / static_cast<double>(nx);

    // same contraction gate as the primary path
    const double C = estimate_envelope(spec.alpha, {1e-3 * spec.T, spec.T},
                                       cfg.envelope_density)
                         .C;
    const double delta = contraction_delta(spec.lipschitz, spec.alpha, spec.T, C);
    if (delta >= 1.0 && !cfg.attempt_anyway) {
        throw GateError("nonlocal_oracle_solve: contraction gate rejected", delta,
                        contraction_delta_theorem_form(spec.lipschitz, spec.alpha, spec.T, C));
    }

    OracleResult out;
    GridFunction v = GridFunction::uniform(nx, 1.0); // v_0 = 0 trace
    ForwardProblem fwd;
    fwd.alpha = spec.alpha;
    fwd.T = spec.T;
    fwd.f = spec.f;

    for (int it = 0; it < cfg.max_iterations; ++it) {
        GridFunction phi = GridFunction::uniform(nx, 1.0);
        for (std::size_t i = 0; i <= nx; ++i) phi[i] = spec.g(i * h, v[i]);
        // Dirichlet compatibility of the iterate
        phi[0] = 0.0;
        phi[nx] = 0.0;
        fwd.phi = phi;
        SpaceTimeField u = fd_forward_solve(fwd, cfg.nt);
        std::vector<double> trace = u.time_slice(cfg.nt);

        out.final_increment = max_abs_diff(trace, v.values());
        v.values() = std::move(trace);
        out.iterations = it + 1;
        if (out.final_increment <= std::max(cfg.tol, 1e-12)) {
            out.converged = true;
            break;
        }
    }
    out.v = std::move(v);
    return out;
}

} // namespace subdiff
