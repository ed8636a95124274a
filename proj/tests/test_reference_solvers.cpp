#include "doctest.h"

#include "subdiff/errors.hpp"
#include "subdiff/reference_solvers.hpp"
#include "subdiff/special_functions.hpp"

#include <cmath>
#include <numbers>

using namespace subdiff;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction sine_profile(std::size_t n, int mode = 1, double amp = 1.0) {
    GridFunction g = GridFunction::uniform(n, 1.0);
    for (std::size_t i = 0; i <= n; ++i) g[i] = amp * std::sin(mode * kPi * g.nodes()[i]);
    return g;
}

} // namespace

TEST_CASE("fd_forward_solve: single mode decays like the Mittag-Leffler factor") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        ForwardProblem p;
        p.alpha = alpha;
        p.T = 1.0;
        p.phi = sine_profile(64);
        p.f = [](double, double) { return 0.0; };
        auto u = fd_forward_solve(p, 512);

        for (std::size_t m : {128UL, 512UL}) {
            const double t = u.t_nodes[m];
            const double factor =
                mittag_leffler({alpha, 1.0}, -kPi * kPi * std::pow(t, alpha));
            double max_err = 0.0;
            for (std::size_t i = 0; i <= 64; ++i)
                max_err = std::max(max_err, std::fabs(u.at(i, m) -
                                                      factor * std::sin(kPi * u.x_nodes[i])));
            CAPTURE(alpha);
            CHECK(max_err < 6e-3 * factor);
        }
    }
}

TEST_CASE("fd_forward_solve: zero data stays zero, compatibility enforced") {
    ForwardProblem p;
    p.alpha = 0.5;
    p.T = 1.0;
    p.phi = GridFunction::uniform(32, 1.0);
    p.f = [](double, double) { return 0.0; };
    auto u = fd_forward_solve(p, 16);
    CHECK(max_norm(u.values) == 0.0);

    GridFunction bad = GridFunction::uniform(32, 1.0);
    bad[0] = 0.5;
    ForwardProblem q = p;
    q.phi = bad;
    CHECK_THROWS_AS(fd_forward_solve(q, 16), DomainError);
}

TEST_CASE("fd_forward_solve: alpha -> 1 approaches the classical heat solution") {
    ForwardProblem p;
    p.alpha = 0.999;
    p.T = 0.5;
    p.phi = sine_profile(96);
    p.f = [](double, double) { return 0.0; };
    auto u = fd_forward_solve(p, 2000);
    const double t = 0.5;
    const double factor = std::exp(-kPi * kPi * t);
    double max_err = 0.0;
    for (std::size_t i = 0; i <= 96; ++i)
        max_err = std::max(max_err,
                           std::fabs(u.at(i, 2000) - factor * std::sin(kPi * u.x_nodes[i])));
    CHECK(max_err < 0.01 * factor);
}

TEST_CASE("fd_forward_solve: empirical time order near 2 - alpha") {
    const double alpha = 0.5;
    ForwardProblem p;
    p.alpha = alpha;
    p.T = 1.0;
    p.phi = sine_profile(512); // fine spatial grid isolates the time error
    p.f = [](double, double) { return 0.0; };

    auto error_at = [&](std::size_t nt) {
        auto u = fd_forward_solve(p, nt);
        const double factor = mittag_leffler({alpha, 1.0}, -kPi * kPi);
        double e = 0.0;
        for (std::size_t i = 0; i <= 512; ++i)
            e = std::max(e, std::fabs(u.at(i, nt) - factor * std::sin(kPi * u.x_nodes[i])));
        return e;
    };
    const double e1 = error_at(64);
    const double e2 = error_at(128);
    const double order = std::log2(e1 / e2);
    CHECK(order > 2.0 - alpha - 0.3);
    CHECK(order < 2.0 - alpha + 0.5);
}

TEST_CASE("spectral_forward_solve: exact single-mode problems") {
    const double alpha = 0.6;
    ForwardProblem p;
    p.alpha = alpha;
    p.T = 1.0;
    p.phi = sine_profile(64, 2, 0.7);
    p.f = [](double, double) { return 0.0; };
    auto u = spectral_forward_solve(p, 32, 32);
    const double lam = 4.0 * kPi * kPi;
    for (std::size_t m : {8UL, 32UL}) {
        const double t = u.t_nodes[m];
        const double factor =
            0.7 * mittag_leffler({alpha, 1.0}, -lam * std::pow(t, alpha));
        double max_err = 0.0;
        for (std::size_t i = 0; i <= 64; ++i)
            max_err = std::max(max_err, std::fabs(u.at(i, m) -
                                                  factor * std::sin(2.0 * kPi * u.x_nodes[i])));
        CHECK(max_err < 1e-9);
    }
}

TEST_CASE("spectral vs fd forward solvers agree on smooth data") {
    ForwardProblem p;
    p.alpha = 0.5;
    p.T = 1.0;
    p.phi = sine_profile(128);
    p.f = [](double x, double t) { return std::sin(kPi * x) * (1.0 + t); };

    auto us = spectral_forward_solve(p, 64, 64);
    auto uf = fd_forward_solve(p, 1024);
    // compare at the shared final time on the shared spatial grid
    double max_err = 0.0;
    for (std::size_t i = 0; i <= 128; ++i)
        max_err = std::max(max_err, std::fabs(us.at(i, 64) - uf.at(i, 1024)));
    CHECK(max_err < 3e-3);

    // disagreement shrinks under fd refinement
    auto uf2 = fd_forward_solve(p, 4096);
    double max_err2 = 0.0;
    for (std::size_t i = 0; i <= 128; ++i)
        max_err2 = std::max(max_err2, std::fabs(us.at(i, 64) - uf2.at(i, 4096)));
    CHECK(max_err2 < max_err);
}

TEST_CASE("nonlocal_oracle_solve: g == 0 reduces to a single forward solve") {
    ProblemSpec spec;
    spec.alpha = 0.5;
    spec.T = 1.0;
    spec.f = [](double x, double t) { return std::sin(kPi * x) * std::exp(-t); };
    spec.g = [](double, double) { return 0.0; };
    spec.lipschitz = 0.0;

    NumericsConfig cfg;
    cfg.nx = 64;
    cfg.nt = 256;
    auto res = nonlocal_oracle_solve(spec, cfg);
    CHECK(res.converged);
    CHECK(res.iterations <= 2);

    ForwardProblem p;
    p.alpha = spec.alpha;
    p.T = spec.T;
    p.phi = GridFunction::uniform(cfg.nx, 1.0);
    p.f = spec.f;
    auto u = fd_forward_solve(p, cfg.nt);
    CHECK(max_abs_diff(res.v.values(), u.time_slice(cfg.nt)) < 1e-12);
}

TEST_CASE("nonlocal oracle: classical initial-value case via L = 0") {
    // g = psi(x): the nonlocal condition collapses to u(x,0) = psi(x)
    ProblemSpec spec;
    spec.alpha = 0.4;
    spec.T = 1.0;
    spec.f = [](double, double) { return 0.0; };
    spec.g = [](double x, double) { return std::sin(kPi * x); };
    spec.lipschitz = 0.0;

    NumericsConfig cfg;
    cfg.nx = 64;
    cfg.nt = 512;
    auto res = nonlocal_oracle_solve(spec, cfg);
    CHECK(res.converged);
    const double want = mittag_leffler({0.4, 1.0}, -kPi * kPi);
    double max_err = 0.0;
    for (std::size_t i = 0; i <= cfg.nx; ++i)
        max_err = std::max(max_err,
                           std::fabs(res.v[i] - want * std::sin(kPi * res.v.nodes()[i])));
    CHECK(max_err < 6e-3);
}
