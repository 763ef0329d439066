#pragma once

// Unevaluated sum of two doubles (about 104 significant bits). Addition is
// the cheap variant: absolute error ~2^-104 (|a| + |b|), which is what a
// transform needs. No FMA assumed; products use Dekker's split.

#include <cmath>

namespace ekscan::detail {

struct DD {
    double hi = 0, lo = 0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
#if defined(__FMA__) || defined(__FP_FAST_FMA)
    return {p, std::fma(a, b, -p)};
#else
    constexpr double kSplit = 134217729.0;  // 2^27 + 1
    const double ta = kSplit * a, tb = kSplit * b;
    const double ah = ta - (ta - a), al = a - ah;
    const double bh = tb - (tb - b), bl = b - bh;
    return {p, ((ah * bh - p) + ah * bl + al * bh) + al * bl};
#endif
}

inline DD operator+(const DD& a, const DD& b) {
    DD s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + (a.lo + b.lo));
}
inline DD operator-(const DD& a) { return {-a.hi, -a.lo}; }
inline DD operator-(const DD& a, const DD& b) { return a + (-b); }

inline DD operator*(const DD& a, const DD& b) {
    DD p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

/// Exact for long double inputs with a 64-bit mantissa.
inline DD dd_from(long double x) {
    const double hi = static_cast<double>(x);
    return {hi, static_cast<double>(x - static_cast<long double>(hi))};
}
inline long double dd_to_ld(const DD& a) {
    return static_cast<long double>(a.hi) + static_cast<long double>(a.lo);
}

inline DD dd_reciprocal(double n) {
    const double hi = 1.0 / n;
    const DD p = two_prod(hi, n);
    return {hi, ((1.0 - p.hi) - p.lo) / n};
}

struct ComplexDD {
    DD re, im;
};

inline ComplexDD operator+(const ComplexDD& a, const ComplexDD& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexDD operator-(const ComplexDD& a, const ComplexDD& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexDD operator*(const ComplexDD& a, const ComplexDD& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexDD operator*(const ComplexDD& a, const DD& s) { return {a.re * s, a.im * s}; }
inline ComplexDD times_i(const ComplexDD& z) { return {-z.im, z.re}; }
inline ComplexDD conj(const ComplexDD& z) { return {z.re, -z.im}; }

}  // namespace ekscan::detail
