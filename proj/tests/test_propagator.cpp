#include "doctest.h"

#include "subdiff/errors.hpp"
#include "subdiff/propagator.hpp"
#include "subdiff/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace subdiff;

namespace {

constexpr double kPi = std::numbers::pi;

// Eigenfunction form of the kernel: 2 sum_k E_alpha(-(k pi)^2 t^alpha)
// sin(k pi x) sin(k pi xi). Modes beyond K are summed in closed form through
// the Laplacian Green function min(x,xi)(1-max(x,xi)), which removes the
// slow 1/k^2 tail.
double kernel_spectral(double x, double xi, double t, double alpha, int modes) {
    const double ta = std::pow(t, alpha);
    const double rg = reciprocal_gamma(1.0 - alpha);
    double acc = std::min(x, xi) * (1.0 - std::max(x, xi)) * rg / ta;
    for (int k = 1; k <= modes; ++k) {
        const double lam = (k * kPi) * (k * kPi);
        const double tail = rg / (lam * ta);
        acc += 2.0 * (mittag_leffler({alpha, 1.0}, -lam * ta) - tail) *
               std::sin(k * kPi * x) * std::sin(k * kPi * xi);
    }
    return acc;
}

} // namespace

TEST_CASE("laplacian tail acceleration is consistent with plain truncation") {
    const double alpha = 0.5, t = 1.0;
    for (double x : {0.25, 0.5}) {
        for (double xi : {0.5, 0.75}) {
            double accel = kernel_spectral(x, xi, t, alpha, 200);
            // brute force with a large mode count
            double plain = 0.0;
            for (int k = 4000; k >= 1; --k) {
                const double lam = (k * kPi) * (k * kPi);
                plain += 2.0 * mittag_leffler({alpha, 1.0}, -lam) * std::sin(k * kPi * x) *
                         std::sin(k * kPi * xi);
            }
            CHECK(accel == doctest::Approx(plain).epsilon(2e-4));
        }
    }
}

TEST_CASE("propagator matches the eigenfunction expansion") {
    const std::size_t n = 32;
    for (double alpha : {0.3, 0.5, 0.7}) {
        PropagatorAssembler assembler(alpha, n);
        for (double t : {0.1, 0.5, 1.0}) {
            auto ker = assembler.assemble_checked(t);
            double max_diff = 0.0, max_ref = 0.0;
            for (std::size_t i = 0; i <= n; ++i) {
                for (std::size_t j = 0; j <= n; ++j) {
                    double ref = kernel_spectral(i / double(n), j / double(n), t, alpha, 400);
                    max_diff = std::max(max_diff, std::fabs(ker.at(i, j) - ref));
                    max_ref = std::max(max_ref, std::fabs(ref));
                }
            }
            CAPTURE(alpha);
            CAPTURE(t);
            CHECK(max_diff <= 1e-4 * max_ref);
        }
    }
}

TEST_CASE("propagator boundary rows vanish and mass is not amplified") {
    const std::size_t n = 48;
    PropagatorAssembler assembler(0.5, n);
    const auto& ker = assembler.at_time(1.0);
    for (std::size_t j = 0; j <= n; ++j) {
        CHECK(std::fabs(ker.at(0, j)) < 1e-12);
        CHECK(std::fabs(ker.at(n, j)) < 1e-9);
    }
    CHECK(ker.mass_max <= 1.0 + 1e-6);
    CHECK(ker.mass_max > 0.0);

    // cache returns the same object
    const auto& again = assembler.at_time(1.0);
    CHECK(&again == &ker);
}

TEST_CASE("propagator: first eigenmode propagation") {
    const std::size_t n = 128;
    const double alpha = 0.5;
    PropagatorAssembler assembler(alpha, n);
    for (double t : {0.2, 1.0}) {
        auto ker = assembler.assemble_checked(t);
        std::vector<double> mode(n + 1);
        for (std::size_t j = 0; j <= n; ++j) mode[j] = std::sin(kPi * j / double(n));
        auto out = ker.apply(mode);
        const double factor = mittag_leffler({alpha, 1.0}, -kPi * kPi * std::pow(t, alpha));
        double max_err = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            max_err = std::max(max_err, std::fabs(out[i] - factor * mode[i]));
        CHECK(max_err < 5e-4 * factor);
    }
}

TEST_CASE("wright profile table agrees with the direct series") {
    detail::WrightProfileTable table(0.25);
    for (double y : {0.0, 0.3, 1.7, 3.9, 8.2, 14.5}) {
        double want = wright_e({1.0, 0.25, 1.0, 0.25}, -y);
        CHECK(table(y) == doctest::Approx(want).epsilon(1e-11));
    }
    CHECK(table(1e9) == 0.0);
}

TEST_CASE("assemble_propagator argument validation") {
    CHECK_THROWS_AS(assemble_propagator(0.0, 0.5, 16), DomainError);
    CHECK_THROWS_AS(PropagatorAssembler(1.2, 16), DomainError);
}
