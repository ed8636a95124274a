#include "doctest.h"

#include "subdiff/errors.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/special_functions.hpp"

#include <cmath>
#include <numbers>

using namespace subdiff;

namespace {

constexpr double kPi = std::numbers::pi;

// Manufactured problem: u*(x,t) = (1 + t^2) sin(pi x), with
// f = 2 t^(2-alpha)/Gamma(3-alpha) sin(pi x) + pi^2 (1+t^2) sin(pi x) and
// g(x,w) = u*(x,0) + lam (w - u*(x,T)) = (1 - lam(1+T^2)) sin(pi x) + lam w.
ProblemSpec manufactured(double alpha, double T, double lam) {
    ProblemSpec spec;
    spec.alpha = alpha;
    spec.T = T;
    const double c = 2.0 / gamma_fn(3.0 - alpha);
    spec.f = [=](double x, double t) {
        return (c * std::pow(t, 2.0 - alpha) + kPi * kPi * (1.0 + t * t)) * std::sin(kPi * x);
    };
    const double psi = 1.0 - lam * (1.0 + T * T);
    spec.g = [=](double x, double w) { return psi * std::sin(kPi * x) + lam * w; };
    spec.lipschitz = std::fabs(lam);
    return spec;
}

double u_star(double x, double t) { return (1.0 + t * t) * std::sin(kPi * x); }

ProblemSpec zero_problem(double alpha = 0.5) {
    ProblemSpec spec;
    spec.alpha = alpha;
    spec.T = 1.0;
    spec.f = [](double, double) { return 0.0; };
    spec.g = [](double, double) { return 0.0; };
    spec.lipschitz = 0.0;
    return spec;
}

} // namespace

TEST_CASE("contraction_delta matches the closed form") {
    // alpha = 0.5, T = 1, C = 1: delta = L Gamma(1/4)/Gamma(3/4)
    CHECK(contraction_delta(0.5, 0.5, 1.0, 1.0) == doctest::Approx(1.4793).epsilon(1e-4));
    CHECK(contraction_delta(0.2, 0.5, 1.0, 1.0) == doctest::Approx(0.5917).epsilon(1e-4));
    CHECK(contraction_delta(0.0, 0.5, 1.0, 1.0) == doctest::Approx(0.0));
    // theorem-form variant differs by T^1 only
    CHECK(contraction_delta_theorem_form(0.2, 0.5, 2.0, 1.0) ==
          doctest::Approx(2.0 * contraction_delta(0.2, 0.5, 2.0, 1.0) * 2.0 / 2.0)
              .epsilon(1e-12));
}

TEST_CASE("compute_F: zero source and single-mode closed form") {
    NumericsConfig cfg;
    cfg.nx = 48;

    auto F0 = compute_F(zero_problem(), cfg);
    CHECK(max_norm(F0.values()) < 1e-12);

    // f = sin(pi x): F(x) = sin(pi x) (1 - E_alpha(-pi^2 T^alpha)) / pi^2
    for (double alpha : {0.3, 0.5, 0.7}) {
        ProblemSpec spec = zero_problem(alpha);
        spec.f = [](double x, double) { return std::sin(kPi * x); };
        auto F = compute_F(spec, cfg);
        const double factor =
            (1.0 - mittag_leffler({alpha, 1.0}, -kPi * kPi)) / (kPi * kPi);
        double max_err = 0.0;
        for (std::size_t i = 0; i <= cfg.nx; ++i) {
            max_err = std::max(max_err,
                               std::fabs(F[i] - factor * std::sin(kPi * F.nodes()[i])));
        }
        CAPTURE(alpha);
        CHECK(max_err < 2e-5 * factor);
    }
}

TEST_CASE("compute_F: paper bound |F| <= (2C/alpha) T^(alpha/2) max|f|") {
    NumericsConfig cfg;
    cfg.nx = 32;
    ProblemSpec spec = manufactured(0.5, 1.0, 0.0);
    NonlocalSolver solver(spec, cfg);
    const auto& F = solver.source_term_trace();
    double max_f = 0.0;
    for (double x = 0.0; x <= 1.0; x += 1.0 / 64.0)
        for (double t = 0.0; t <= 1.0; t += 1.0 / 64.0)
            max_f = std::max(max_f, std::fabs(spec.f(x, t)));
    const double bound = 2.0 * solver.envelope_constant() / spec.alpha * max_f;
    CHECK(max_norm(F.values()) <= bound);
}

TEST_CASE("fixed point: g == 0 converges to F in one step") {
    NumericsConfig cfg;
    cfg.nx = 32;
    ProblemSpec spec = zero_problem();
    spec.f = [](double x, double) { return std::sin(kPi * x); };
    NonlocalSolver solver(spec, cfg);
    auto res = solver.fixed_point_solve();
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    CHECK(max_abs_diff(res.v.values(), solver.source_term_trace().values()) == 0.0);
}

TEST_CASE("fixed point: manufactured problem recovers the final trace") {
    NumericsConfig cfg;
    cfg.nx = 64;
    cfg.nt = 64;
    ProblemSpec spec = manufactured(0.5, 1.0, 0.5);
    NonlocalSolver solver(spec, cfg);
    auto res = solver.fixed_point_solve();
    REQUIRE(res.report.converged);
    CHECK(res.report.delta < 0.5);
    CHECK(res.report.gate_passed);

    double max_err = 0.0;
    for (std::size_t i = 0; i <= cfg.nx; ++i)
        max_err = std::max(max_err,
                           std::fabs(res.v[i] - u_star(res.v.nodes()[i], spec.T)));
    CHECK(max_err < 5e-3); // discretisation budget at nx = 64

    // observed tail contraction <= delta * 1.25
    REQUIRE(!res.report.observed_ratios.empty());
    for (std::size_t k = 1; k < res.report.observed_ratios.size(); ++k)
        CHECK(res.report.observed_ratios[k] <= res.report.delta * 1.25);
}

TEST_CASE("fixed point: uniqueness of the limit across starting iterates") {
    NumericsConfig cfg;
    cfg.nx = 32;
    cfg.nt = 16;
    ProblemSpec spec = manufactured(0.5, 1.0, 0.4);
    NonlocalSolver solver(spec, cfg);
    auto from_F = solver.fixed_point_solve();
    auto from_zero = solver.fixed_point_solve(GridFunction::uniform(cfg.nx, 1.0));
    REQUIRE(from_F.report.converged);
    REQUIRE(from_zero.report.converged);
    const double delta = from_F.report.delta;
    CHECK(max_abs_diff(from_F.v.values(), from_zero.v.values()) <=
          2.0 * cfg.tol / (1.0 - delta));
}

TEST_CASE("fixed point: gate rejection carries both deltas") {
    NumericsConfig cfg;
    cfg.nx = 16;
    cfg.nt = 8;
    ProblemSpec spec = manufactured(0.5, 1.0, 4.0); // delta well above 1
    NonlocalSolver solver(spec, cfg);
    CHECK_THROWS_AS(solver.fixed_point_solve(), GateError);
    try {
        solver.fixed_point_solve();
    } catch (const GateError& e) {
        CHECK(e.delta_derivation >= 1.0);
        CHECK(e.delta_theorem > 0.0);
    }
}

TEST_CASE("fixed point: lipschitz probe rejects understated constants") {
    NumericsConfig cfg;
    cfg.nx = 16;
    cfg.nt = 8;
    ProblemSpec spec = zero_problem();
    spec.g = [](double, double w) { return 0.8 * w; };
    spec.lipschitz = 0.1; // understated on purpose
    NonlocalSolver solver(spec, cfg);
    CHECK_THROWS_AS(solver.fixed_point_solve(), DomainError);
}

TEST_CASE("gate soundness: iteration count bounded by the delta-rate estimate") {
    NumericsConfig cfg;
    cfg.nx = 32;
    cfg.nt = 16;
    cfg.tol = 1e-9;
    for (double lam : {0.2, 0.5, 0.9}) {
        ProblemSpec spec = manufactured(0.5, 1.0, lam);
        NonlocalSolver solver(spec, cfg);
        auto res = solver.fixed_point_solve();
        REQUIRE(res.report.converged);
        const double d0 = res.report.increments.front();
        const double delta = res.report.delta;
        REQUIRE(delta < 1.0);
        const int bound =
            static_cast<int>(std::ceil(std::log(cfg.tol / d0) / std::log(delta))) + 2;
        CHECK(res.report.iterations <= bound);
    }
}

TEST_CASE("iteration count grows monotonically with delta") {
    NumericsConfig cfg;
    cfg.nx = 24;
    cfg.nt = 8;
    cfg.tol = 1e-10;
    int prev = 0;
    for (double lam : {0.1, 0.3, 0.6, 0.9, 1.2}) {
        ProblemSpec spec = manufactured(0.5, 1.0, lam);
        NonlocalSolver solver(spec, cfg);
        auto res = solver.fixed_point_solve();
        REQUIRE(res.report.converged);
        CHECK(res.report.iterations >= prev);
        prev = res.report.iterations;
    }
}

TEST_CASE("reconstruct_u: zero problem is identically zero") {
    NumericsConfig cfg;
    cfg.nx = 16;
    cfg.nt = 8;
    NonlocalSolver solver(zero_problem(), cfg);
    auto bundle = solver.solve();
    CHECK(max_norm(bundle.u.values) < 1e-12);
    CHECK(bundle.residuals.pde_max < 1e-12);
    CHECK(bundle.residuals.boundary_max < 1e-12);
    CHECK(bundle.residuals.nonlocal_max < 1e-12);
}

TEST_CASE("reconstruct_u: consistency closure and manufactured field") {
    NumericsConfig cfg;
    cfg.nx = 48;
    cfg.nt = 48;
    ProblemSpec spec = manufactured(0.5, 1.0, 0.5);
    NonlocalSolver solver(spec, cfg);
    auto res = solver.fixed_point_solve();
    REQUIRE(res.report.converged);
    auto u = solver.reconstruct_u(res.v);

    CHECK(u.t0_extrapolated);

    // re-extracted final row reproduces v
    double closure = 0.0;
    for (std::size_t i = 0; i <= cfg.nx; ++i)
        closure = std::max(closure, std::fabs(u.at(i, cfg.nt) - res.v[i]));
    CHECK(closure <= 1e-4 * std::max(1.0, max_norm(res.v.values())));

    // field against the manufactured solution
    double max_err = 0.0;
    for (std::size_t m = 0; m <= cfg.nt; ++m)
        for (std::size_t i = 0; i <= cfg.nx; ++i)
            max_err = std::max(max_err,
                               std::fabs(u.at(i, m) - u_star(u.x_nodes[i], u.t_nodes[m])));
    CHECK(max_err < 1e-2);

    // residual record stays within the discretisation budget
    auto rec = verify_regularity(u, spec);
    CHECK(rec.boundary_max < 1e-10);
    CHECK(rec.nonlocal_max < 0.05);
}

TEST_CASE("verify_regularity: residual decays under refinement") {
    ProblemSpec spec = manufactured(0.5, 1.0, 0.5);
    double prev = 0.0;
    std::size_t grids[] = {24, 48};
    double rates[2];
    int idx = 0;
    for (std::size_t n : grids) {
        NumericsConfig cfg;
        cfg.nx = n;
        cfg.nt = n;
        NonlocalSolver solver(spec, cfg);
        auto bundle = solver.solve();
        rates[idx++] = bundle.residuals.pde_max;
        prev = bundle.residuals.pde_max;
    }
    (void)prev;
    // O(dt^(2-alpha) + dx^2): halving the spacing should shrink the residual
    // by at least 2^(2-alpha-0.3) ~ 2.3
    CHECK(rates[0] / rates[1] > 2.0);
}
