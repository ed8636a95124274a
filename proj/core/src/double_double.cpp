#include "subdiff/double_double.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace subdiff {

namespace {

// 1/k! for k = 0..30, computed once by exact integer division.
const std::array<DD, 31>& inv_factorials() {
    static const std::array<DD, 31> table = [] {
        std::array<DD, 31> t{};
        t[0] = DD{1.0};
        for (int k = 1; k <= 30; ++k) t[k] = t[k - 1] / DD(static_cast<double>(k));
        return t;
    }();
    return table;
}

} // namespace

DD dd_exp(DD a) {
    if (a.hi <= -746.0) return {0.0, 0.0};
    if (a.hi >= 710.0) return {std::numeric_limits<double>::infinity(), 0.0};

    // exp(a) = 2^m * exp(r)^(2^9) with r = (a - m ln2)/512, |r| small.
    double m = std::floor(a.hi / DD_LN2.hi + 0.5);
    DD r = ldexp(a - DD_LN2 * DD(m), -9);

    const auto& invf = inv_factorials();
    // s = exp(r) - 1 via Taylor; |r| <= ln2/1024 so ~8 terms suffice.
    DD p = r * r;
    DD s = r + ldexp(p, -1);
    p = p * r;
    DD term = p * invf[3];
    int k = 3;
    while (std::fabs(term.hi) > 1e-40 && k < 14) {
        s = s + term;
        p = p * r;
        ++k;
        term = p * invf[k];
    }
    s = s + term;

    // (1+s)^(2^9): s <- s^2 + 2s nine times.
    for (int i = 0; i < 9; ++i) s = s * s + ldexp(s, 1);
    s = s + DD(1.0);
    return ldexp(s, static_cast<int>(m));
}

DD dd_log(DD a) {
    if (!(a.hi > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    // Newton iteration on exp(y) = a, seeded by the double log.
    DD y{std::log(a.hi)};
    for (int i = 0; i < 2; ++i) y = y + a * dd_exp(-y) - DD(1.0);
    return y;
}

DD dd_sqrt(DD a) {
    if (a.hi == 0.0) return {0.0, 0.0};
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    // One Karp correction step.
    DD err = a - DD(ax) * DD(ax);
    return ddops::quick_two_sum(ax, err.hi * (x * 0.5));
}

DD dd_sinpi(DD x) {
    // sin(pi x) has period 2; reduce x to [-1, 1] exactly (x - 2 round(x/2)
    // is exact in dd for |x| < 2^50).
    double n = std::floor(x.hi / 2.0 + 0.5);
    DD r = x - DD(2.0 * n);
    // Fold to [-1/2, 1/2]: sin(pi(1 - r)) = sin(pi r).
    if (r.hi > 0.5) r = DD(1.0) - r;
    else if (r.hi < -0.5) r = DD(-1.0) - r;

    if (r.hi == 0.0 && r.lo == 0.0) return {0.0, 0.0};

    bool use_cos = std::fabs(r.hi) > 0.25;
    double sign = 1.0;
    DD u;
    if (use_cos) {
        // sin(pi r) = cos(pi(1/2 - |r|)) * sign(r)
        if (r.hi < 0.0) { sign = -1.0; r = -r; }
        u = DD_PI * (DD(0.5) - r);
    } else {
        u = DD_PI * r;
    }

    const auto& invf = inv_factorials();
    DD u2 = u * u;
    DD s;
    if (use_cos) {
        s = DD(1.0);
        DD p{1.0};
        double fs = -1.0;
        for (int k = 2; k <= 28; k += 2) {
            p = p * u2;
            DD term = p * invf[k];
            s = s + (fs > 0 ? term : -term);
            fs = -fs;
            if (std::fabs(term.hi) < 1e-40) break;
        }
    } else {
        s = u;
        DD p = u;
        double fs = -1.0;
        for (int k = 3; k <= 29; k += 2) {
            p = p * u2;
            DD term = p * invf[k];
            s = s + (fs > 0 ? term : -term);
            fs = -fs;
            if (std::fabs(term.hi) < 1e-40) break;
        }
    }
    return sign > 0 ? s : -s;
}

namespace {

// Stirling series coefficients B_{2k}/(2k(2k-1)) as dd pairs. With the
// argument shifted to y >= 26 the series has no cancellation and truncates
// below 1e-33 by k = 18.
constexpr std::array<DD, 18> kStirlingQ = {{
    {0.08333333333333333, 4.625929269271485e-18},
    {-0.002777777777777778, 1.0601087908747154e-19},
    {0.0007936507936507937, 6.883823317368282e-22},
    {-0.0005952380952380953, 5.36938218754726e-20},
    {0.0008417508417508417, 3.6870174889237694e-20},
    {-0.0019175269175269176, 1.0675702776872475e-19},
    {0.00641025641025641, 2.2240044563805217e-19},
    {-0.029550653594771242, 4.861760957508855e-19},
    {0.17964437236883057, -6.401600482710946e-19},
    {-1.3924322169059011, 1.5837056989230303e-17},
    {13.402864044168393, -6.154114101993966e-16},
    {-156.84828462600203, 9.391823141715389e-15},
    {2193.1033333333335, -1.3339255626002948e-13},
    {-36108.77125372499, 5.897583353514365e-13},
    {691472.268851313, 2.5585296305158e-11},
    {-15238221.539407415, -8.76774522490625e-10},
    {382900751.39141417, -2.4082684757733585e-08},
    {-10882266035.784391, 3.141830930219749e-07},
}};

// log Gamma(y) for y >= 26 by the Stirling series.
DD dd_lgamma_stirling(DD y) {
    static const DD half_log_2pi = DD(0.5) * dd_log(DD_PI * DD(2.0));
    DD acc = (y - DD(0.5)) * dd_log(y) - y + half_log_2pi;
    DD y2 = y * y;
    DD p = y;
    for (const DD& q : kStirlingQ) {
        DD term = q / p;
        acc = acc + term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(acc.hi)) break;
        p = p * y2;
    }
    return acc;
}

} // namespace

DD dd_gamma(DD x) {
    if (!(x.hi > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (x.hi > 171.6) return {std::numeric_limits<double>::infinity(), 0.0};
    // Shift the argument above the Stirling threshold, then divide the
    // shift factors back out: Gamma(x) = Gamma(x+n) / (x (x+1) ... (x+n-1)).
    DD shifted = x;
    DD prod{1.0};
    while (shifted.hi < 26.0) {
        prod = prod * shifted;
        shifted = shifted + DD(1.0);
    }
    return dd_exp(dd_lgamma_stirling(shifted)) / prod;
}

DD dd_lgamma(DD x) {
    if (!(x.hi > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    DD shifted = x;
    DD prod{1.0};
    while (shifted.hi < 26.0) {
        prod = prod * shifted;
        shifted = shifted + DD(1.0);
    }
    DD out = dd_lgamma_stirling(shifted);
    if (prod.hi != 1.0 || prod.lo != 0.0) out = out - dd_log(prod);
    return out;
}

DD dd_rgamma(DD x) {
    if (x.hi > 0.5) return DD(1.0) / dd_gamma(x);
    // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, entire in x
    DD s = dd_sinpi(x);
    if (s.hi == 0.0 && s.lo == 0.0) return {0.0, 0.0};
    DD one_minus = DD(1.0) - x;
    if (one_minus.hi > 171.6) {
        // 1/Gamma overflows here; callers in the series kernels never need
        // this regime at full precision.
        double mag = std::lgamma(one_minus.hi) + std::log(std::fabs(s.to_double())) -
                     std::log(DD_PI.hi);
        double v = mag > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(mag);
        return {std::copysign(v, s.to_double()), 0.0};
    }
    return s * dd_gamma(one_minus) / DD_PI;
}

} // namespace subdiff
