#pragma once

// Independent reference values for the tests. Nothing here uses the library's
// coefficient table or series; everything goes through Hurwitz-type
// Euler-Maclaurin sums or Boost.Math at about 120 digits.

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using OReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<120>,
                                            boost::multiprecision::et_off>;
using std::complex;

inline constexpr int kShift = 64;   // direct terms before the asymptotic tail
inline constexpr int kTerms = 40;   // Bernoulli corrections

inline const std::vector<OReal>& bernoulli_table() {
    static const std::vector<OReal> b = [] {
        std::vector<OReal> v(kTerms + 1);
        for (int j = 0; j <= kTerms; ++j) v[j] = boost::math::bernoulli_b2n<OReal>(j);
        return v;
    }();
    return b;
}

// truncated power series c0 + c1 s + c2 s^2
struct Jet {
    OReal c0{0}, c1{0}, c2{0};
};
inline Jet operator+(const Jet& a, const Jet& b) { return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2}; }
inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0, a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0};
}
inline Jet operator*(const OReal& k, const Jet& a) { return {k * a.c0, k * a.c1, k * a.c2}; }
// u^{-s} around s = 0
inline Jet neg_power(const OReal& u) {
    const OReal L = log(u);
    return {OReal(1), -L, L * L / 2};
}

// zeta(s, x) expanded at s = 0
inline Jet hurwitz_jet(const OReal& x) {
    const auto& B = bernoulli_table();
    Jet s;
    for (int k = 0; k < kShift; ++k) s = s + neg_power(x + k);
    const OReal t = x + kShift;
    const Jet tp = neg_power(t);
    const Jet inv_sm1{OReal(-1), OReal(-1), OReal(-1)};  // 1/(s-1)
    s = s + t * (tp * inv_sm1);
    s = s + OReal(0.5) * tp;
    Jet rising{OReal(0), OReal(1), OReal(0)};  // (s)_1
    OReal fact = 2;
    OReal tpow = 1 / t;
    for (int j = 1; j <= kTerms; ++j) {
        s = s + (B[j] / fact * tpow) * (rising * tp);
        rising = rising * Jet{OReal(2 * j - 1), OReal(1), OReal(0)};
        rising = rising * Jet{OReal(2 * j), OReal(1), OReal(0)};
        fact *= OReal(2 * j + 1) * (2 * j + 2);
        tpow /= t * t;
    }
    return s;
}

inline OReal zeta_second_zero() { return 2 * hurwitz_jet(OReal(1)).c2; }

// S(x) = zeta''(0, x) - zeta''(0)
inline OReal S(const OReal& x) {
    static const OReal at_one = hurwitz_jet(OReal(1)).c2;
    return 2 * (hurwitz_jet(x).c2 - at_one);
}

// generalized Stieltjes constant gamma_1(x)
inline OReal stieltjes1(const OReal& x) {
    const auto& B = bernoulli_table();
    OReal s = 0;
    for (int k = 0; k < kShift; ++k) s += log(x + k) / (x + k);
    const OReal t = x + kShift;
    const OReal lt = log(t);
    s += -lt * lt / 2 + lt / (2 * t);
    OReal h = 1;  // H_{2j-1}
    OReal tpow = 1 / (t * t);
    for (int j = 1; j <= kTerms; ++j) {
        s += B[j] / (2 * j) * (lt - h) * tpow;
        h += OReal(1) / (2 * j) + OReal(1) / (2 * j + 1);
        tpow /= t * t;
    }
    return s;
}

inline OReal gamma1() {
    static const OReal g1 = stieltjes1(OReal(1));
    return g1;
}

// T(x) = gamma_1 - gamma_1(x)
inline OReal T(const OReal& x) { return gamma1() - stieltjes1(x); }

inline OReal euler_gamma() {
    const auto& B = bernoulli_table();
    const OReal M = kShift;
    OReal s = 0;
    for (int k = 1; k < kShift; ++k) s += OReal(1) / k;
    s += -log(M) + 1 / (2 * M);
    OReal mpow = 1 / (M * M);
    for (int j = 1; j <= kTerms; ++j) {
        s += B[j] / (2 * j) * mpow;
        mpow /= M * M;
    }
    return s;
}

inline OReal log_gamma(const OReal& x) { return boost::math::lgamma(x); }
inline OReal digamma(const OReal& x) { return boost::math::digamma(x); }
inline OReal zeta(const OReal& s) { return boost::math::zeta(s); }
inline OReal pi() { return boost::math::constants::pi<OReal>(); }

inline std::uint64_t primitive_root(std::uint64_t q) {
    for (std::uint64_t g = 2;; ++g) {
        std::uint64_t v = 1;
        std::uint64_t order = 0;
        do {
            v = v * g % q;
            ++order;
        } while (v != 1);
        if (order == q - 1) return g;
    }
}

// L'/L(1, chi_j), j = 1..q-2, straight from an explicit character table:
//   -log q + sum chi(a) gamma_1(a/q) / sum chi(a) psi(a/q)
inline std::vector<complex<long double>> lderiv_bruteforce(std::uint64_t q) {
    const std::uint64_t g = primitive_root(q);
    std::vector<std::uint64_t> dlog(q);
    std::uint64_t v = 1;
    for (std::uint64_t k = 0; k + 1 < q; ++k) {
        dlog[v] = k;
        v = v * g % q;
    }
    std::vector<long double> g1(q), ps(q);
    for (std::uint64_t a = 1; a < q; ++a) {
        const OReal x = OReal(a) / OReal(q);
        g1[a] = stieltjes1(x).convert_to<long double>();
        ps[a] = digamma(x).convert_to<long double>();
    }
    const long double two_pi = 2 * pi().convert_to<long double>();
    const long double logq = std::log(static_cast<long double>(q));
    std::vector<complex<long double>> out(q - 1);
    for (std::uint64_t j = 1; j + 1 < q; ++j) {
        complex<long double> num = 0, den = 0;
        for (std::uint64_t a = 1; a < q; ++a) {
            const long double ang = two_pi * static_cast<long double>((j * dlog[a]) % (q - 1)) / (q - 1);
            const complex<long double> chi(std::cos(ang), std::sin(ang));
            num += chi * g1[a];
            den += chi * ps[a];
        }
        out[j] = -logq + num / den;
    }
    return out;
}

// O(N^2) DFT with sign +1 forward, unnormalized.
inline std::vector<complex<long double>> dft(const std::vector<complex<long double>>& x) {
    const std::size_t n = x.size();
    const long double two_pi = 2 * pi().convert_to<long double>();
    std::vector<complex<long double>> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        complex<long double> acc = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const long double ang = two_pi * static_cast<long double>((j * k) % n) / n;
            acc += x[k] * complex<long double>(std::cos(ang), std::sin(ang));
        }
        y[j] = acc;
    }
    return y;
}

}  // namespace oracle
