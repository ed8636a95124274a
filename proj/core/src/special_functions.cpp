#include "subdiff/special_functions.hpp"

#include "subdiff/double_double.hpp"
#include "subdiff/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace subdiff {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Lanczos approximation, g = 7, 9 coefficients.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,          676.5203681218851,     -1259.1392167224028,
    771.32342877765313,           -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,         9.9843695780195716e-6, 1.5056327351493116e-7};

// Gamma(x) for x >= 0.5.
double lanczos_gamma_pos(double x) {
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (z + k);
    const double t = z + 7.5;
    if (x > 140.0) {
        // keep the intermediate power from overflowing
        return std::exp(0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t +
                        std::log(acc));
    }
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double log_abs_rgamma(double x) {
    // log |1/Gamma(x)|, valid for any non-pole x; used only for the
    // magnitude of far-tail series terms.
    if (x > 0.5) return -std::lgamma(x);
    double s = sinpi(x);
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(s)) + std::lgamma(1.0 - x) - std::log(kPi);
}

} // namespace

double sinpi(double x) {
    double r = x - 2.0 * std::round(0.5 * x);
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

double gamma_fn(double a) {
    if (std::isnan(a)) throw DomainError("gamma_fn: NaN argument");
    if (is_nonpositive_integer(a))
        throw DomainError("gamma_fn: pole at non-positive integer argument");
    if (a >= 0.5) return lanczos_gamma_pos(a);
    // reflection; sinpi keeps accuracy near the poles
    return kPi / (sinpi(a) * lanczos_gamma_pos(1.0 - a));
}

double reciprocal_gamma(double a) {
    if (std::isnan(a)) return std::numeric_limits<double>::quiet_NaN();
    if (a >= 0.5) return 1.0 / lanczos_gamma_pos(a);
    double s = sinpi(a);
    if (s == 0.0) return 0.0; // entire function, zero at the poles of Gamma
    double one_minus = 1.0 - a;
    if (one_minus > 171.0) {
        double mag = std::log(std::fabs(s)) + std::lgamma(one_minus) - std::log(kPi);
        if (mag > 709.0) return std::copysign(std::numeric_limits<double>::infinity(), s);
        return std::copysign(std::exp(mag), s);
    }
    return s * lanczos_gamma_pos(one_minus) / kPi;
}

double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("beta_fn: arguments must be positive");
    // lgamma-based form: stable for large arguments and an independent code
    // path from gamma_fn's Lanczos evaluation
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double wright_decay_rate(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw DomainError("wright_decay_rate: beta must lie in (0,1)");
    return std::pow(beta, beta / (1.0 - beta)) * (1.0 - beta);
}

// ---------------------------------------------------------------------------
// Series kernels
// ---------------------------------------------------------------------------

namespace {

constexpr int kSeriesCap = 2000; // hard cap on series terms

struct SeriesResult {
    double value = 0.0;
    double condition = 1.0; // sum |t_n| / |sum t_n|
    bool converged = false;
};

// Term magnitude (logs) and sign for the far tail of the Wright series.
double wright_tail_term(const WrightIndices& idx, double z, int n, double llz) {
    const double a1 = idx.gamma * n + idx.mu;
    const double a2 = idx.delta - idx.beta * n;
    const double lt = n * llz - std::lgamma(a1) + log_abs_rgamma(a2);
    if (lt < -745.0) return 0.0;
    double sgn = (z < 0.0 && (n & 1)) ? -1.0 : 1.0;
    if (a2 <= 0.5) {
        const double s = sinpi(a2);
        sgn *= s < 0.0 ? -1.0 : (s == 0.0 ? 0.0 : 1.0);
    }
    return sgn * std::exp(lt);
}

// Double-precision Kahan-compensated evaluation of the Wright-type series.
SeriesResult wright_series_double(const WrightIndices& idx, double z) {
    SeriesResult out;
    double sum = 0.0, comp = 0.0, sum_abs = 0.0;
    double zn = 1.0;
    const double llz = std::log(std::fabs(z) + 1e-300);
    const bool unit_gamma = idx.gamma == 1.0;
    double rg1 = unit_gamma ? reciprocal_gamma(idx.mu) : 0.0;
    int small_run = 0;

    for (int n = 0; n < kSeriesCap; ++n) {
        const double a1 = idx.gamma * n + idx.mu;
        const double a2 = idx.delta - idx.beta * n;
        double t;
        if (a1 > 144.0 || a2 < -143.0 || n * llz > 600.0) {
            t = wright_tail_term(idx, z, n, llz);
        } else {
            const double r1 = unit_gamma ? rg1 : reciprocal_gamma(a1);
            t = zn * r1 * reciprocal_gamma(a2);
        }

        double y = t - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        sum_abs += std::fabs(t);

        if (std::fabs(t) <= 1e-16 * (std::fabs(sum) + 1e-300)) {
            if (++small_run >= 3 && n >= 4) {
                out.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        zn *= z;
        if (unit_gamma) rg1 /= (n + idx.mu);
        if (!std::isfinite(sum)) break;
    }
    out.value = sum;
    out.condition = sum_abs / (std::fabs(sum) + 1e-300);
    return out;
}

// Double-double evaluation; rescues the alternating series when the double
// path has lost too many digits to cancellation.
double wright_series_ddimpl(const WrightIndices& idx, double z) {
    DD sum{0.0};
    DD zn{1.0};
    const DD zd{z};
    double sum_abs = 0.0;
    const double llz = std::log(std::fabs(z) + 1e-300);
    const bool unit_gamma = idx.gamma == 1.0;
    DD rg1 = unit_gamma ? dd_rgamma(DD(idx.mu)) : DD(0.0);
    int small_run = 0;

    const DD dd_llz = dd_log(dd_abs(zd) + DD(1e-300));
    for (int n = 0; n < kSeriesCap; ++n) {
        const double a1 = idx.gamma * n + idx.mu;
        const double a2 = idx.delta - idx.beta * n;
        DD t;
        if (a1 > 144.0 || a2 < -143.0 || n * llz > 600.0) {
            // Individual factors overflow/underflow here although the term
            // itself may still be large: assemble it in dd log space.
            DD v2 = DD(idx.delta) - DD(idx.beta) * DD(static_cast<double>(n));
            DD s2 = v2.hi <= 0.5 ? dd_sinpi(v2) : DD(1.0);
            if (s2.hi == 0.0 && s2.lo == 0.0) {
                t = DD(0.0);
            } else {
                DD lt = DD(static_cast<double>(n)) * dd_llz - dd_lgamma(DD(a1));
                if (v2.hi <= 0.5) {
                    lt = lt + dd_log(dd_abs(s2)) + dd_lgamma(DD(1.0) - v2) -
                         dd_log(DD_PI);
                } else {
                    lt = lt - dd_lgamma(v2);
                }
                double sgn = (z < 0.0 && (n & 1)) ? -1.0 : 1.0;
                if (s2.hi < 0.0) sgn = -sgn;
                t = dd_exp(lt);
                if (sgn < 0.0) t = -t;
            }
        } else {
            DD r1 = unit_gamma ? rg1 : dd_rgamma(DD(a1));
            t = zn * r1 *
                dd_rgamma(DD(idx.delta) - DD(idx.beta) * DD(static_cast<double>(n)));
        }
        // Alternating case: once terms pass e^200 the cancelled value (O(10)
        // at most for z < 0) sits hopelessly below the conditioning horizon.
        if (z < 0.0 && std::fabs(t.hi) > 1e87) return 0.0;
        sum += t;
        sum_abs += std::fabs(t.hi);

        if (std::fabs(t.hi) <= 1e-33 * (std::fabs(sum.hi) + 1e-300)) {
            if (++small_run >= 3 && n >= 4) break;
        } else {
            small_run = 0;
        }
        zn *= zd;
        if (unit_gamma) rg1 /= DD(n + idx.mu);
        if (!std::isfinite(sum.hi)) break;
    }
    if (!std::isfinite(sum.hi)) return z < 0.0 ? 0.0 : sum.to_double();
    // Below the extended-precision noise floor the only defensible double
    // answer is zero; returning the residue would hand callers pure noise.
    if (std::fabs(sum.hi) < 1e-26 * sum_abs) return 0.0;
    return sum.to_double();
}

SeriesResult ml_series_double(double rho, double mu, double z) {
    SeriesResult out;
    double sum = 0.0, comp = 0.0, sum_abs = 0.0;
    double zn = 1.0;
    const double llz = std::log(std::fabs(z) + 1e-300);
    int small_run = 0;
    for (int n = 0; n < kSeriesCap; ++n) {
        const double a = rho * n + mu;
        double t;
        if (a > 169.0 || n * llz > 600.0) {
            double lt = n * llz - std::lgamma(a);
            t = lt < -745.0 ? 0.0 : ((z < 0.0 && (n & 1)) ? -1.0 : 1.0) * std::exp(lt);
        } else {
            t = zn * reciprocal_gamma(a);
        }
        double y = t - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        sum_abs += std::fabs(t);
        if (std::fabs(t) <= 1e-16 * (std::fabs(sum) + 1e-300)) {
            if (++small_run >= 3 && n >= 4) {
                out.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        zn *= z;
        if (!std::isfinite(sum)) break;
    }
    out.value = sum;
    out.condition = sum_abs / (std::fabs(sum) + 1e-300);
    return out;
}

double ml_series_ddimpl(double rho, double mu, double z) {
    DD sum{0.0};
    DD zn{1.0};
    const DD zd{z};
    double sum_abs = 0.0;
    const double llz = std::log(std::fabs(z) + 1e-300);
    int small_run = 0;
    for (int n = 0; n < kSeriesCap; ++n) {
        const double a = rho * n + mu;
        DD t;
        if (a > 169.0 || n * llz > 600.0) {
            double lt = n * llz - std::lgamma(a);
            double v = lt < -745.0 ? 0.0
                                   : ((z < 0.0 && (n & 1)) ? -1.0 : 1.0) * std::exp(lt);
            t = DD(v);
        } else {
            t = zn * dd_rgamma(DD(rho) * DD(static_cast<double>(n)) + DD(mu));
        }
        sum += t;
        sum_abs += std::fabs(t.hi);
        if (std::fabs(t.hi) <= 1e-33 * (std::fabs(sum.hi) + 1e-300)) {
            if (++small_run >= 3 && n >= 4) break;
        } else {
            small_run = 0;
        }
        zn *= zd;
        if (!std::isfinite(sum.hi)) break;
    }
    if (std::fabs(sum.hi) < 1e-27 * sum_abs) return 0.0;
    return sum.to_double();
}

// Algebraic asymptotic expansion for z <= -30:
//   E_{rho,mu}(z) ~ -sum_{k>=1} z^{-k} / Gamma(mu - rho k).
// Terms on a Gamma pole vanish; truncation is at the smallest term.
double ml_asymptotic(double rho, double mu, double z) {
    double sum = 0.0;
    double zk = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    double last_nonzero = std::numeric_limits<double>::infinity();
    int small_run = 0;
    for (int k = 1; k <= 300; ++k) {
        zk /= z;
        const double t = -zk * reciprocal_gamma(mu - rho * k);
        const double at = std::fabs(t);
        if (at > 0.0) {
            if (k > 2 && at >= prev) break; // optimal truncation reached
            prev = at;
            last_nonzero = at;
        }
        sum += t;
        if (at <= 1e-16 * (std::fabs(sum) + 1e-300)) {
            if (++small_run >= 3 && std::fabs(sum) > 0.0) return sum;
        } else {
            small_run = 0;
        }
    }
    const double achieved = last_nonzero / (std::fabs(sum) + 1e-300);
    if (achieved > 1e-10)
        throw AccuracyError("mittag_leffler: asymptotic expansion stalled", achieved);
    return sum;
}

// Non-oscillatory real integral representation for z < 0, 0 < rho < 1,
// 0 < mu < 1 + rho. After r = s^rho the integrand is
//   (1/pi) s^(rho-mu) e^(-s) N(s)/D(s),
//   N = s^rho sin(pi(1-mu)) - z sin(pi(1-mu+rho)),
//   D = s^(2 rho) - 2 s^rho z cos(pi rho) + z^2,
// evaluated with a double-exponential substitution s = exp(u - e^(-u)).
double ml_integral(double rho, double mu, double z) {
    const double snu = sinpi(1.0 - mu);
    const double snur = sinpi(1.0 - mu + rho);
    const double cr = std::cos(kPi * rho);
    const double z2 = z * z;

    const double h = 0.025;
    double acc = 0.0;
    for (double u = -6.8; u <= 4.6; u += h) {
        const double emu = std::exp(-u);
        const double ls = u - emu; // log s
        const double s = std::exp(ls);
        const double sr = std::exp(rho * ls);
        const double num = sr * snu - z * snur;
        const double den = sr * sr - 2.0 * sr * z * cr + z2;
        // fold the jacobian s(1+e^-u) into the power to avoid under/overflow
        const double w = std::exp((rho - mu + 1.0) * ls - s) * (1.0 + emu);
        acc += w * num / den;
    }
    return acc * h / kPi;
}

} // namespace

namespace detail {
double wright_series_dd(const WrightIndices& idx, double z) {
    return wright_series_ddimpl(idx, z);
}
double mittag_leffler_series_dd(double rho, double mu, double z) {
    return ml_series_ddimpl(rho, mu, z);
}
} // namespace detail

double mittag_leffler(MLIndices idx, double z) {
    if (!(idx.rho > 0.0) || !(idx.rho <= 1.0))
        throw DomainError("mittag_leffler: rho must lie in (0,1]");
    if (!std::isfinite(z) || !std::isfinite(idx.mu))
        throw DomainError("mittag_leffler: non-finite argument");

    if (idx.rho == 1.0 && idx.mu == 1.0) return std::exp(z);
    if (z == 0.0) return reciprocal_gamma(idx.mu);

    // Lower mu into the range where the integral representation is valid;
    // E_{rho,mu}(z) = (E_{rho,mu-rho}(z) - 1/Gamma(mu-rho)) / z.
    if (idx.mu >= 1.0 + idx.rho && z < 0.0) {
        double lowered = mittag_leffler({idx.rho, idx.mu - idx.rho}, z);
        return (lowered - reciprocal_gamma(idx.mu - idx.rho)) / z;
    }

    SeriesResult s = ml_series_double(idx.rho, idx.mu, z);
    if (s.converged && s.condition < 1e3) return s.value;

    if (z > 0.0) return ml_series_ddimpl(idx.rho, idx.mu, z);
    if (z <= -30.0) return ml_asymptotic(idx.rho, idx.mu, z);
    if (idx.rho >= 0.95 || idx.mu <= 0.01)
        return ml_series_ddimpl(idx.rho, idx.mu, z);
    return ml_integral(idx.rho, idx.mu, z);
}

double wright_e(WrightIndices idx, double z) {
    if (!(idx.gamma > 0.0) || !(idx.gamma > idx.beta))
        throw DomainError("wright_e: convergence requires gamma > 0 and gamma > beta");
    if (!std::isfinite(z)) throw DomainError("wright_e: non-finite argument");

    if (z == 0.0) return reciprocal_gamma(idx.mu) * reciprocal_gamma(idx.delta);

    SeriesResult s = wright_series_double(idx, z);
    if (s.converged && s.condition < 1e2) return s.value;
    return wright_series_ddimpl(idx, z);
}

LemmaBoundReport check_lemma_bounds(WrightIndices idx, double x) {
    if (!(x > 0.0)) throw DomainError("check_lemma_bounds: x must be positive");
    LemmaBoundReport rep;
    rep.x = x;
    rep.value = wright_e(idx, -x);

    const bool lemma_family = idx.gamma == 1.0 && idx.mu == 1.0 && idx.beta > 0.0 &&
                              idx.beta < 1.0;
    if (!lemma_family) return rep; // all flags not applicable

    if (idx.delta >= 0.0) rep.positivity_holds = rep.value > 0.0;

    if (idx.delta >= idx.beta) {
        const double h = std::max(1e-3 * x, 1e-6);
        const double left = x > h ? wright_e(idx, -(x - h)) : wright_e(idx, -(0.5 * x));
        const double right = wright_e(idx, -(x + h));
        rep.monotone_holds = left > rep.value && rep.value > right;
    }

    if (idx.delta >= 1.0) {
        const double env = reciprocal_gamma(idx.delta) *
                           std::exp(-std::pow(x, 1.0 / (1.0 - idx.beta)) *
                                    wright_decay_rate(idx.beta));
        rep.envelope = env;
        rep.envelope_holds = rep.value > 0.0 && rep.value <= env * (1.0 + 1e-10);
    }
    return rep;
}

} // namespace subdiff
