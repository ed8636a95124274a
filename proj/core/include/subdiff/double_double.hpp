#pragma once

#include <cmath>

namespace subdiff {

/// Unevaluated sum of two doubles giving ~32 significant digits.
/// Used as the compensated-arithmetic backend for ill-conditioned series
/// (alternating sums whose value is far below the largest term) and as the
/// extended-precision reference in tests. Only what the series kernels need
/// is implemented: +,-,*,/, exp, log, sqrt, sin(pi x), Gamma and 1/Gamma.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace ddops {

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace ddops

inline DD operator+(DD a, DD b) {
    DD s = ddops::two_sum(a.hi, b.hi);
    DD t = ddops::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = ddops::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return ddops::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = ddops::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return ddops::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - DD(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - DD(q2) * b;
    double q3 = r.hi / b.hi;
    DD q = ddops::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline DD& operator+=(DD& a, DD b) { a = a + b; return a; }
inline DD& operator-=(DD& a, DD b) { a = a - b; return a; }
inline DD& operator*=(DD& a, DD b) { a = a * b; return a; }
inline DD& operator/=(DD& a, DD b) { a = a / b; return a; }

inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }

inline DD dd_abs(DD a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }
inline DD ldexp(DD a, int n) { return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)}; }

DD dd_exp(DD a);
DD dd_log(DD a);
DD dd_sqrt(DD a);

/// sin(pi*x), exact zero at integers.
DD dd_sinpi(DD x);

/// Gamma(x) for x > 0 (Stirling series with argument shift, ~1e-30 relative).
DD dd_gamma(DD x);

/// log Gamma(x) for x > 0; valid for arbitrarily large x.
DD dd_lgamma(DD x);

/// 1/Gamma(x) as an entire function: exact 0 at non-positive integers.
DD dd_rgamma(DD x);

inline constexpr DD DD_PI{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DD DD_LN2{6.931471805599452862e-01, 2.319046813846299558e-17};

} // namespace subdiff
