#pragma once

#include <optional>

namespace subdiff {

/// Euler Gamma function. Poles (non-positive integers) raise DomainError.
/// >= 12 significant digits on (0, 170); negative non-integer arguments go
/// through the reflection formula.
double gamma_fn(double a);

/// 1/Gamma as an entire function: returns exactly 0 at non-positive
/// integers, so series terms sitting on a Gamma pole vanish instead of
/// raising.
double reciprocal_gamma(double a);

/// Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a,b > 0.
double beta_fn(double a, double b);

/// sin(pi*x) with exact zeros at integers (argument reduced before scaling
/// by pi).
double sinpi(double x);

/// Indices of the two-parameter Mittag-Leffler function E_{rho,mu}.
struct MLIndices {
    double rho; // in (0, 1]
    double mu;
};

/// E_{rho,mu}(z) = sum_n z^n / Gamma(rho n + mu).
///
/// For z <= 0 (the regime the solver uses) relative error <= 1e-10:
///  - power series (compensated, with a double-double rescue when the
///    alternating sum is ill-conditioned) for small |z|,
///  - a non-oscillatory real integral representation on the middle band,
///  - the algebraic asymptotic expansion for z < -30.
/// Throws AccuracyError (carrying the achieved estimate) if no branch can
/// reach the budget.
double mittag_leffler(MLIndices idx, double z);

/// Indices of the four-index Wright-type series
/// e^{mu,delta}_{gamma,beta}(z) = sum_n z^n / (Gamma(gamma n + mu) Gamma(delta - beta n)).
struct WrightIndices {
    double mu;
    double delta;
    double gamma; // series index scale; convergence needs gamma > 0, gamma > beta
    double beta;
};

/// Wright-type series value. Terms whose Gamma(delta - beta n) sits on a
/// pole contribute exactly 0 (reciprocal-gamma convention). Convergence
/// condition gamma > 0 and gamma > beta is enforced (DomainError).
double wright_e(WrightIndices idx, double z);

/// Exponent constant k(beta) = beta^(beta/(1-beta)) (1-beta) appearing in
/// the decay envelope exp(-k x^(1/(1-beta))) of e^{1,delta}_{1,beta}(-x).
double wright_decay_rate(double beta);

/// Report produced by check_lemma_bounds. Flags are empty when the
/// corresponding hypothesis does not hold for the given indices.
struct LemmaBoundReport {
    double x = 0.0;
    double value = 0.0;                    // e^{1,delta}_{1,beta}(-x)
    std::optional<double> envelope;        // (1/Gamma(delta)) exp(-k x^(1/(1-beta))), delta >= 1
    std::optional<bool> positivity_holds;  // delta >= 0, beta in (0,1)
    std::optional<bool> monotone_holds;    // delta >= beta, sampled neighbour comparison
    std::optional<bool> envelope_holds;    // delta >= 1
};

/// Evaluate e^{1,delta}_{1,beta}(-x) together with the monotonicity /
/// positivity / exponential-envelope predicates at x > 0. Hypothesis gates
/// follow the statement of the bounds: flags outside their hypotheses are
/// left unset ("not applicable").
LemmaBoundReport check_lemma_bounds(WrightIndices idx, double x);

namespace detail {
/// Series evaluation in double-double arithmetic; exposed for the
/// extended-precision reference paths in the test suites.
double wright_series_dd(const WrightIndices& idx, double z);
double mittag_leffler_series_dd(double rho, double mu, double z);
} // namespace detail

} // namespace subdiff
