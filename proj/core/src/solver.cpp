#include "subdiff/solver.hpp"

#include "subdiff/detail/parallel_for.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/fractional_calculus.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/special_functions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace subdiff {

namespace detail {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned threads = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SUBDIFF_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1 && parsed <= 256) threads = static_cast<unsigned>(parsed);
    }
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

void ProblemSpec::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("ProblemSpec: alpha must lie in (0,1)");
    if (!(T > 0.0)) throw DomainError("ProblemSpec: T must be positive");
    if (!(lipschitz >= 0.0)) throw DomainError("ProblemSpec: Lipschitz constant must be >= 0");
    if (!f) throw DomainError("ProblemSpec: source term f is not set");
    if (!g) throw DomainError("ProblemSpec: nonlocal function g is not set");
}

double contraction_delta(double L, double alpha, double T, double C) {
    if (!(alpha > 0.0) || !(alpha < 1.0) || !(T > 0.0) || !(C > 0.0) || L < 0.0)
        throw DomainError("contraction_delta: invalid arguments");
    return C * L * std::pow(T, -0.5 * alpha) * gamma_fn(0.5 * alpha) /
           gamma_fn(1.0 - 0.5 * alpha);
}

double contraction_delta_theorem_form(double L, double alpha, double T, double C) {
    if (!(alpha > 0.0) || !(alpha < 1.0) || !(T > 0.0) || !(C > 0.0) || L < 0.0)
        throw DomainError("contraction_delta_theorem_form: invalid arguments");
    return C * L * std::pow(T, 1.0 - 0.5 * alpha) * gamma_fn(0.5 * alpha) /
           gamma_fn(1.0 - 0.5 * alpha);
}

double apriori_sup_bound(double L, double alpha, double T, double C, double max_abs_f) {
    return (2.0 * C / alpha) * std::pow(T, 0.5 * alpha) *
           std::exp(L * std::pow(T, -0.5 * alpha) * gamma_fn(0.5 * alpha) /
                    gamma_fn(1.0 - 0.5 * alpha)) *
           max_abs_f;
}

namespace {

PropagatorConfig make_propagator_config(const NumericsConfig& cfg) {
    PropagatorConfig pc;
    pc.quad_order = cfg.quad_order;
    pc.max_quad_order = std::min(cfg.max_quad_order, 512);
    pc.quad_check_tol = cfg.quad_check_tol;
    pc.green.image_cutoff = cfg.image_cutoff;
    pc.green.tail_tol = cfg.tail_tol;
    return pc;
}

} // namespace

NonlocalSolver::NonlocalSolver(ProblemSpec spec, NumericsConfig cfg)
    : spec_(std::move(spec)),
      cfg_(cfg),
      assembler_(spec_.alpha, cfg.nx, make_propagator_config(cfg)) {
    spec_.validate();
    if (cfg_.nt < 4) throw DomainError("NumericsConfig: nt must be at least 4");
}

double NonlocalSolver::envelope_constant() {
    if (!envelope_C_) {
        const double hi = spec_.T;
        const double lo = 1e-3 * spec_.T;
        envelope_C_ = estimate_envelope(spec_.alpha, {lo, hi}, cfg_.envelope_density).C;
    }
    return *envelope_C_;
}

std::vector<double> NonlocalSolver::source_term_at(double t) {
    const std::size_t n = cfg_.nx;
    const double h = 1.0 / static_cast<double>(n);
    const double beta = 0.5 * spec_.alpha;
    const double alpha = spec_.alpha;
    const double rate = wright_decay_rate(beta);
    const auto trap = trapezoid_weights(n + 1, h);
    const int order = source_quad_order();

    // tau integral with weight (t-tau)^(alpha-1): the xi-integrated kernel
    // carries mass ~ (t-tau)^(alpha-1), so the remaining factor is bounded
    const QuadRule rule = gauss_jacobi(order, alpha - 1.0, 0.0);

    std::vector<double> F(n + 1, 0.0);
    const int nn = static_cast<int>(n);
    std::vector<double> profile(3 * n + 1);
    std::vector<double> fw(n + 1);

    // reuse the assembler's Wright profile table through a local green sum
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double tau = t * rule.nodes[q];
        const double s = t - tau;
        const double sb = std::pow(s, -beta);

        int M = cfg_.image_cutoff;
        {
            auto tail = [&](int m0) {
                double acc = 0.0;
                for (int m = m0 + 1; m <= m0 + 80; ++m) {
                    const double y = std::max(2.0 * m - 2.0, 0.5) * sb;
                    const double term = 8.0 * reciprocal_gamma(beta) * (1.0 + y) *
                                        std::exp(-rate * std::pow(y, 1.0 / (1.0 - beta)));
                    acc += term;
                    if (term == 0.0 || term < 1e-3 * acc) break;
                }
                return acc;
            };
            while (M < 96 && tail(M) > cfg_.tail_tol) M += 2;
        }

        const detail::WrightProfileTable& table = assembler_.wright_table();
        for (int d = -nn; d <= 2 * nn; ++d) {
            const double base = d * h;
            double acc = table(std::fabs(base) * sb);
            for (int m = 1; m <= M; ++m)
                acc += table(std::fabs(2.0 * m + base) * sb) +
                       table(std::fabs(-2.0 * m + base) * sb);
            profile[static_cast<std::size_t>(d + nn)] = acc;
        }

        for (std::size_t j = 0; j <= n; ++j) fw[j] = trap[j] * spec_.f(j * h, tau);

        // weight bookkeeping: t^alpha W_q (t-tau)^(1-alpha) * 0.5 s^(beta-1)
        const double wq = std::pow(t, alpha) * rule.weights[q] * std::pow(s, 1.0 - alpha) *
                          0.5 * std::pow(s, beta - 1.0);
        for (int i = 0; i <= nn; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= nn; ++j)
                acc += fw[static_cast<std::size_t>(j)] *
                       (profile[static_cast<std::size_t>(i - j + nn)] -
                        profile[static_cast<std::size_t>(i + j + nn)]);
            F[static_cast<std::size_t>(i)] += wq * acc;
        }
    }
    return F;
}

const GridFunction& NonlocalSolver::source_term_trace() {
    if (!F_) {
        F_ = GridFunction(linspace(cfg_.nx, 1.0), source_term_at(spec_.T));
    }
    return *F_;
}

int NonlocalSolver::source_quad_order() {
    if (f_quad_order_ > 0) return f_quad_order_;
    // Richardson self-check at t = T: double the order until two successive
    // evaluations agree, then freeze the order for every other time level.
    int order = cfg_.quad_order;
    f_quad_order_ = order; // allow source_term_at to run during the check
    std::vector<double> coarse = source_term_at(spec_.T);
    while (order < cfg_.max_quad_order) {
        f_quad_order_ = 2 * order;
        std::vector<double> fine = source_term_at(spec_.T);
        const double scale = std::max(1.0, max_norm(fine));
        if (max_abs_diff(coarse, fine) <= cfg_.quad_check_tol * scale) {
            f_quad_order_ = 2 * order;
            return f_quad_order_;
        }
        coarse = std::move(fine);
        order *= 2;
    }
    throw AccuracyError("compute_F: quadrature self-check did not converge",
                        cfg_.quad_check_tol);
}

void NonlocalSolver::probe_lipschitz_constant() {
    if (lipschitz_checked_) return;
    lipschitz_checked_ = true;

    // probe window: twice the a-priori bound (plus a floor for f == 0)
    double max_f = 0.0;
    for (std::size_t i = 0; i <= 16; ++i)
        for (std::size_t m = 0; m <= 16; ++m)
            max_f = std::max(max_f, std::fabs(spec_.f(i / 16.0, spec_.T * m / 16.0)));
    const double C = envelope_constant();
    const double W =
        2.0 * apriori_sup_bound(spec_.lipschitz, spec_.alpha, spec_.T, C, max_f) + 1.0;

    std::mt19937 rng(997);
    std::uniform_real_distribution<double> dist(-W, W);
    for (int probe = 0; probe < 256; ++probe) {
        const double x = (probe % 17) / 16.0;
        const double w1 = dist(rng);
        const double w2 = dist(rng);
        if (w1 == w2) continue;
        const double slope = std::fabs(spec_.g(x, w1) - spec_.g(x, w2)) / std::fabs(w1 - w2);
        if (slope > spec_.lipschitz * (1.0 + 1e-6)) {
            throw DomainError(
                "ProblemSpec: sampled difference quotient of g exceeds the declared "
                "Lipschitz constant (observed " +
                std::to_string(slope) + " > " + std::to_string(spec_.lipschitz) + ")");
        }
    }
}

ContractionReport NonlocalSolver::gate_report() {
    ContractionReport rep;
    rep.C_used = envelope_constant();
    rep.delta = contraction_delta(spec_.lipschitz, spec_.alpha, spec_.T, rep.C_used);
    rep.delta_theorem =
        contraction_delta_theorem_form(spec_.lipschitz, spec_.alpha, spec_.T, rep.C_used);
    rep.gate_passed = rep.delta < 1.0;
    return rep;
}

FixedPointResult NonlocalSolver::fixed_point_solve(std::optional<GridFunction> v0) {
    probe_lipschitz_constant();
    ContractionReport rep = gate_report();
    if (!rep.gate_passed && !cfg_.attempt_anyway) {
        throw GateError("fixed_point_solve: contraction gate rejected (delta = " +
                            std::to_string(rep.delta) + " >= 1)",
                        rep.delta, rep.delta_theorem);
    }

    const GridFunction& F = source_term_trace();
    const PropagatorKernel& K = assembler_.at_time(spec_.T);
    const std::size_t n = cfg_.nx;
    const double h = 1.0 / static_cast<double>(n);

    GridFunction v = v0 ? std::move(*v0) : F;
    std::vector<double> gv(n + 1);

    int grow_run = 0;
    for (int it = 0; it < cfg_.max_iterations; ++it) {
        for (std::size_t j = 0; j <= n; ++j) gv[j] = spec_.g(j * h, v[j]);
        std::vector<double> next = K.apply(gv);
        for (std::size_t j = 0; j <= n; ++j) next[j] += F[j];

        const double inc = max_abs_diff(next, v.values());
        rep.increments.push_back(inc);
        if (rep.increments.size() > 1) {
            const double prev = rep.increments[rep.increments.size() - 2];
            if (prev > 0.0) rep.observed_ratios.push_back(inc / prev);
        }
        v.values() = std::move(next);
        rep.iterations = it + 1;

        if (inc <= cfg_.tol) {
            rep.converged = true;
            break;
        }
        if (!rep.observed_ratios.empty() && rep.observed_ratios.back() > 1.05 &&
            rep.increments.size() >= 2 && inc > rep.increments.front()) {
            if (++grow_run >= 3) {
                rep.diverged = true;
                break;
            }
        } else {
            grow_run = 0;
        }
    }
    if (rep.converged && rep.delta < 1.0 && !rep.increments.empty()) {
        rep.aposteriori_bound = rep.delta / (1.0 - rep.delta) * rep.increments.back();
    }
    return {std::move(v), std::move(rep)};
}

SpaceTimeField NonlocalSolver::reconstruct_u(const GridFunction& v) {
    const std::size_t n = cfg_.nx;
    const std::size_t nt = cfg_.nt;
    const double h = 1.0 / static_cast<double>(n);
    const double dt = spec_.T / static_cast<double>(nt);

    SpaceTimeField u;
    u.x_nodes = linspace(n, 1.0);
    u.t_nodes = linspace(nt, spec_.T);
    u.values.assign((n + 1) * (nt + 1), 0.0);

    std::vector<double> gv(n + 1);
    for (std::size_t j = 0; j <= n; ++j) gv[j] = spec_.g(j * h, v[j]);

    source_quad_order(); // freeze the F order before going parallel

    const int kernel_order = assembler_.checked_order(spec_.T);
    detail::parallel_for(nt, [&](std::size_t level) {
        const std::size_t m = level + 1;
        const double t = m * dt;
        PropagatorKernel K = assembler_.assemble(t, kernel_order);
        std::vector<double> row = K.apply(gv);
        std::vector<double> F = source_term_at(t);
        for (std::size_t i = 0; i <= n; ++i) u.at(i, m) = row[i] + F[i];
    });

    // t = 0: two-point Richardson extrapolation with exponent alpha from the
    // first two positive rows (the kernel is singular at t = 0 itself)
    const double q = std::pow(2.0, spec_.alpha);
    for (std::size_t i = 0; i <= n; ++i)
        u.at(i, 0) = (q * u.at(i, 1) - u.at(i, 2)) / (q - 1.0);
    u.t0_extrapolated = true;
    u.note = "t=0 row: Richardson extrapolation in t^alpha from rows at dt and 2dt";
    return u;
}

SolutionBundle NonlocalSolver::solve() {
    SolutionBundle bundle;
    auto fp = fixed_point_solve();
    bundle.v = std::move(fp.v);
    bundle.report = std::move(fp.report);
    bundle.u = reconstruct_u(bundle.v);
    bundle.residuals = verify_regularity(bundle.u, spec_);
    return bundle;
}

GridFunction compute_F(const ProblemSpec& spec, const NumericsConfig& cfg) {
    NonlocalSolver solver(spec, cfg);
    return solver.source_term_trace();
}

FixedPointResult fixed_point_solve(const ProblemSpec& spec, const NumericsConfig& cfg) {
    NonlocalSolver solver(spec, cfg);
    return solver.fixed_point_solve();
}

SpaceTimeField reconstruct_u(const GridFunction& v, const ProblemSpec& spec,
                             const NumericsConfig& cfg) {
    NonlocalSolver solver(spec, cfg);
    return solver.reconstruct_u(v);
}

SolutionBundle solve_nonlocal(const ProblemSpec& spec, const NumericsConfig& cfg) {
    NonlocalSolver solver(spec, cfg);
    return solver.solve();
}

ResidualRecord verify_regularity(const SpaceTimeField& u, const ProblemSpec& spec) {
    spec.validate();
    const std::size_t nx = u.nx();
    const std::size_t nt = u.nt();
    if (nx < 3 || nt < 4)
        throw DomainError("verify_regularity: grid too coarse for differencing");
    const double dx = u.x_nodes[1] - u.x_nodes[0];
    const double dt = u.t_nodes[1] - u.t_nodes[0];

    ResidualRecord rec;
    rec.t_min_checked = std::max(3.0 * dt, 0.05 * spec.T);

    for (std::size_t m = 0; m < nt; ++m) {
        rec.boundary_max = std::max(rec.boundary_max, std::fabs(u.at(0, m)));
        rec.boundary_max = std::max(rec.boundary_max, std::fabs(u.at(nx - 1, m)));
    }
    for (std::size_t i = 0; i < nx; ++i) {
        const double target = spec.g(u.x_nodes[i], u.at(i, nt - 1));
        rec.nonlocal_max = std::max(rec.nonlocal_max, std::fabs(u.at(i, 0) - target));
    }

    // PDE residual: L1 Caputo in time, centred second difference in space
    std::vector<std::vector<double>> caputo_cols(nx);
    for (std::size_t i = 1; i + 1 < nx; ++i)
        caputo_cols[i] = caputo_l1(u.space_slice(i), dt, spec.alpha);

    for (std::size_t m = 1; m < nt; ++m) {
        const double t = u.t_nodes[m];
        if (t < rec.t_min_checked) continue;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double uxx = (u.at(i - 1, m) - 2.0 * u.at(i, m) + u.at(i + 1, m)) / (dx * dx);
            const double r = caputo_cols[i][m] - uxx - spec.f(u.x_nodes[i], t);
            rec.pde_max = std::max(rec.pde_max, std::fabs(r));
        }
    }
    return rec;
}

} // namespace subdiff
