#pragma once

// Certified evaluation of the Deninger functions
//
//     S(x) = -zeta''(0) - R(x),   R(x) = log Gamma_1(x),
//     T(x) = gamma_1 + psi_1(x),  psi_1 = R'/2,
//
// and of log Gamma and digamma on (0, 1), all by truncated Taylor series at 1.
// Points in (0, 1/2) are shifted to (1, 3/2) through the difference
// equations, so at most about n terms are ever needed for 2^-n accuracy.
//
// The returned error bound is the analytic truncation bound; rounding
// (at most 4 * terms * ulp of the working scalar) is not included.

#include "ekscan/coeffs.hpp"
#include "ekscan/summation.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

namespace ekscan {

template <class Real>
struct EvalResult {
    Real value{0};
    Real error_bound{0};
    int terms_used = 0;
};

/// A positive argument, optionally known exactly as a/q. The fractional part
/// and its complement are kept separately so that 1 - {x} does not lose
/// digits when {x} is close to 1.
template <class Real>
class DomainPoint {
public:
    static DomainPoint from_real(const Real& x) {
        using std::floor;
        if (!(x > 0)) throw DomainError("argument must be positive, got " + to_string(x, 20));
        if (x > Real(std::int64_t{1} << 62)) throw DomainError("argument too large");
        DomainPoint p;
        const Real w = floor(x);
        p.whole_ = narrow<long double>(w) >= 0 ? static_cast<std::int64_t>(narrow<long double>(w)) : 0;
        p.frac_ = x - w;
        p.one_minus_frac_ = 1 - p.frac_;
        p.half_ = p.frac_ * 2 == 1;
        return p;
    }

    /// a/q in lowest terms; a, q >= 1.
    static DomainPoint from_ratio(std::int64_t a, std::int64_t q) {
        if (a < 1 || q < 1) throw DomainError("rational argument needs a >= 1 and q >= 1");
        const std::int64_t g = std::gcd(a, q);
        a /= g;
        q /= g;
        DomainPoint p;
        p.ratio_ = {a, q};
        p.whole_ = a / q;
        const std::int64_t rem = a % q;
        p.frac_ = Real(rem) / Real(q);
        p.one_minus_frac_ = Real(q - rem) / Real(q);
        p.half_ = (q == 2);
        return p;
    }

    Real value() const { return Real(whole_) + frac_; }
    std::int64_t whole() const { return whole_; }
    const Real& frac() const { return frac_; }
    const Real& one_minus_frac() const { return one_minus_frac_; }
    bool is_integer() const { return frac_ == 0; }
    bool frac_is_half() const { return half_; }
    std::optional<std::pair<std::int64_t, std::int64_t>> ratio() const { return ratio_; }

private:
    DomainPoint() = default;
    std::int64_t whole_ = 0;
    Real frac_{0}, one_minus_frac_{1};
    bool half_ = false;
    std::optional<std::pair<std::int64_t, std::int64_t>> ratio_;
};

// ---------------------------------------------------------------------------
// truncation indices

namespace detail {

inline constexpr double kLn2 = 0.69314718055994530942;

/// ceil(((n+2) log 2 + |log(1-d)|) / |log d|) - 1 for d = |1-x| in (0,1),
/// given a = |log d| and b = |log(1-d)|.
inline int truncation_index_s(double a, double b, int n) {
    const double q = ((n + 2) * kLn2 + b) / a;
    return static_cast<int>(std::ceil(q)) - 1;
}

/// Smallest r with r >= 1 + ((n+2) log 2 - log a + log log r)/a, r*a >= 1,
/// r >= min_r; a = |log d|.
inline int truncation_index_t(double a, int n, int min_r) {
    auto rhs = [&](int r) {
        const double llr = std::log(std::log(static_cast<double>(r)));
        return 1.0 + ((n + 2) * kLn2 - std::log(a) + llr) / a;
    };
    int floor_r = std::max({3, min_r, static_cast<int>(std::ceil(1.0 / a))});
    int r = std::max(n + 4, floor_r);
    for (int iter = 0; iter < 200; ++iter) {
        int next = std::max(static_cast<int>(std::ceil(rhs(r))), floor_r);
        if (next == r) break;
        r = next;
    }
    // the iteration lands on the least fixed point; step down defensively in
    // case of floating-point ties
    while (r > floor_r && (r - 1) >= rhs(r - 1)) --r;
    return r;
}

template <class Real>
double abs_log(const Real& v) {
    using std::abs;
    using std::log;
    return narrow<double>(abs(log(v)));
}

template <class Real>
void require_table(const CoefficientTable<Real>& t, int r, int n) {
    if (n > t.bits()) throw ResourceError("requested " + std::to_string(n) + " bits from a " +
                                          std::to_string(t.bits()) + "-bit coefficient table");
    if (r > t.max_index()) throw ResourceError("truncation index " + std::to_string(r) +
                                               " exceeds coefficient table length");
}

}  // namespace detail

/// Guaranteed-sufficient truncation index for the S series at x in
/// (0,1) u (1,2).
inline int r_S(double x, int n) {
    if (!(x > 0 && x < 2) || x == 1) throw DomainError("r_S: x must lie in (0,1) u (1,2)");
    const double d = std::abs(1 - x);
    return detail::truncation_index_s(std::abs(std::log(d)), std::abs(std::log1p(-d)), n);
}

/// Truncation index for the T series; also enforces r >= ceil(1/x) and
/// r |log|1-x|| >= 1.
inline int r_T(double x, int n) {
    if (!(x > 0 && x < 2) || x == 1) throw DomainError("r_T: x must lie in (0,1) u (1,2)");
    const double d = std::abs(1 - x);
    return detail::truncation_index_t(std::abs(std::log(d)), n, static_cast<int>(std::ceil(1.0 / x)));
}

// ---------------------------------------------------------------------------
// closed forms at 1/2

/// S(1/2) = (log pi)^2/2 + pi^2/24 - gamma_1 - gamma^2/2 - (log 2)^2.
template <class Real>
Real s_at_half(const CoefficientTable<Real>& t) {
    const Real& lp = t.log_pi();
    const Real& l2 = t.log2();
    const Real& g = t.gamma();
    return lp * lp / 2 + t.pi() * t.pi() / 24 - t.gamma1() - g * g / 2 - l2 * l2;
}

/// T(1/2) = (log 2)^2 + 2 gamma log 2.
template <class Real>
Real t_at_half(const CoefficientTable<Real>& t) {
    const Real& l2 = t.log2();
    return l2 * l2 + 2 * t.gamma() * l2;
}

// ---------------------------------------------------------------------------
// kernels on (0,1); x and y = 1 - x both supplied

namespace detail {

template <class Real>
EvalResult<Real> s_unit(const Real& x, const Real& y, bool half, int n, const CoefficientTable<Real>& t) {
    using std::log;
    EvalResult<Real> out;
    out.error_bound = pow2<Real>(-n - 1);
    if (half) {
        out.value = s_at_half(t);
        out.error_bound = 0;
        return out;
    }
    const auto c = t.s_coefficients();
    PairwiseAccumulator<Real> acc;
    if (x < y) {
        // shifted: S(x) = (log x)^2 + 2 gamma_1 x + sum_k 2L(k)/k (-x)^k
        const int r = std::max(3, truncation_index_s(abs_log(x), abs_log(y), n));
        require_table(t, r, n);
        const Real lx = log(x);
        Real p = -x;
        for (int k = 2; k <= r; ++k) {
            p *= -x;
            acc += c[k] * p;
        }
        out.value = lx * lx + 2 * t.gamma1() * x + acc.value();
        out.terms_used = r - 1;
    } else {
        // direct: S(x) = -2 gamma_1 (1-x) + sum_k 2L(k)/k (1-x)^k
        const int r = std::max(3, truncation_index_s(abs_log(y), abs_log(x), n));
        require_table(t, r, n);
        Real p = y;
        for (int k = 2; k <= r; ++k) {
            p *= y;
            acc += c[k] * p;
        }
        out.value = acc.value() - 2 * t.gamma1() * y;
        out.terms_used = r - 1;
    }
    return out;
}

template <class Real>
EvalResult<Real> t_unit(const Real& x, const Real& y, bool half, int n, const CoefficientTable<Real>& t) {
    using std::log;
    EvalResult<Real> out;
    out.error_bound = pow2<Real>(-n);
    if (half) {
        out.value = t_at_half(t);
        out.error_bound = 0;
        return out;
    }
    const auto c = t.t_coefficients();
    PairwiseAccumulator<Real> acc;
    if (x < y) {
        // shifted: T(x) = -(log x)/x + sum_k L(k) (-x)^{k-1}
        const int r = truncation_index_t(abs_log(x), n, 1);
        require_table(t, r, n);
        Real p = Real(1);
        for (int k = 2; k <= r; ++k) {
            p *= -x;
            acc += c[k] * p;
        }
        out.value = acc.value() - log(x) / x;
        out.terms_used = r - 1;
    } else {
        // direct: T(x) = sum_k L(k) (1-x)^{k-1}; the ceil(1/x) side condition
        // is at most 2 here
        const int r = truncation_index_t(abs_log(y), n, 2);
        require_table(t, r, n);
        Real p = Real(1);
        for (int k = 2; k <= r; ++k) {
            p *= y;
            acc += c[k] * p;
        }
        out.value = acc.value();
        out.terms_used = r - 1;
    }
    return out;
}

/// Number of Euler-series terms for log Gamma / digamma at |z| <= 1/2 so the
/// tail is below 2^-(n+1).
template <class Real>
int euler_series_length(const Real& z, const Real& one_minus_z, int n) {
    const double a = abs_log(z);
    const double b = abs_log(one_minus_z);
    return std::max(2, static_cast<int>(std::ceil(((n + 2) * kLn2 + b) / a)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public evaluators

/// S(x) for x > 0, dispatching on integer, x > 1, 1/2, (0,1/2) and (1/2,1).
template <class Real>
EvalResult<Real> deninger_s(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    using std::log;
    if (p.is_integer()) {
        PairwiseAccumulator<Real> acc;
        for (std::int64_t k = 2; k <= p.whole() - 1; ++k) {
            const Real lk = log(Real(k));
            acc += lk * lk;
        }
        return {Real(-acc.value()), Real(0), 0};
    }
    auto out = detail::s_unit(p.frac(), p.one_minus_frac(), p.frac_is_half(), n, t);
    if (p.whole() > 0) {
        PairwiseAccumulator<Real> acc;
        for (std::int64_t k = 0; k < p.whole(); ++k) {
            const Real l = log(p.frac() + Real(k));
            acc += l * l;
        }
        out.value -= acc.value();
    }
    return out;
}

/// T(x) for x > 0.
template <class Real>
EvalResult<Real> deninger_t(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    using std::log;
    if (p.is_integer()) {
        PairwiseAccumulator<Real> acc;
        for (std::int64_t k = 2; k <= p.whole() - 1; ++k) acc += log(Real(k)) / Real(k);
        return {acc.value(), Real(0), 0};
    }
    auto out = detail::t_unit(p.frac(), p.one_minus_frac(), p.frac_is_half(), n, t);
    if (p.whole() > 0) {
        PairwiseAccumulator<Real> acc;
        for (std::int64_t k = 0; k < p.whole(); ++k) {
            const Real u = p.frac() + Real(k);
            acc += log(u) / u;
        }
        out.value += acc.value();
    }
    return out;
}

/// R(x) = log Gamma_1(x) = -zeta''(0) - S(x).
template <class Real>
EvalResult<Real> log_gamma1(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    auto out = deninger_s(p, n, t);
    out.value = -t.zeta_second_zero() - out.value;
    return out;
}

/// psi_1(x) = T(x) - gamma_1.
template <class Real>
EvalResult<Real> psi1(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    auto out = deninger_t(p, n, t);
    out.value -= t.gamma1();
    return out;
}

/// S(x) + S(1-x) on (0,1) from the even-index coefficients only. At x = 1/2
/// returns 2 S(1/2).
template <class Real>
EvalResult<Real> s_reflect_sum(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    using std::log;
    if (p.whole() != 0 || p.is_integer()) throw DomainError("s_reflect_sum: x must lie in (0,1)");
    EvalResult<Real> out;
    if (p.frac_is_half()) {
        out.value = 2 * s_at_half(t);
        return out;
    }
    // the smaller of x, 1-x carries the series; the other only enters the
    // truncation index
    const bool low = p.frac() < p.one_minus_frac();
    const Real& u = low ? p.frac() : p.one_minus_frac();
    const Real& v = low ? p.one_minus_frac() : p.frac();
    const int r_full = detail::truncation_index_s(detail::abs_log(u), detail::abs_log(v), n);
    const int r = std::max(1, (r_full + 1) / 2);
    detail::require_table(t, 2 * r, n);
    const auto c = t.reflect_coefficients();
    const Real u2 = u * u;
    Real pw = Real(1);
    PairwiseAccumulator<Real> acc;
    for (int l = 1; l <= r; ++l) {
        pw *= u2;
        acc += c[l] * pw;
    }
    const Real lu = log(u);
    out.value = lu * lu + acc.value();
    out.error_bound = pow2<Real>(-n - 1);
    out.terms_used = r;
    return out;
}

/// log Gamma(x) on (0,1) from Euler's series at 1.
template <class Real>
EvalResult<Real> log_gamma(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    using std::log;
    if (p.whole() != 0 || p.is_integer()) throw DomainError("log_gamma: x must lie in (0,1)");
    const Real& x = p.frac();
    const Real& y = p.one_minus_frac();
    const bool low = x < y;
    const Real& z = low ? x : y;
    const int r = detail::euler_series_length(z, low ? y : x, n);
    detail::require_table(t, r, n);
    const auto c = t.loggamma_coefficients();
    // low:  log Gamma(x) = -log x - gamma x + sum zeta(k)/k (-x)^k
    // high: log Gamma(x) = gamma y + sum zeta(k)/k y^k
    const Real step = low ? Real(-z) : z;
    Real pw = step;
    PairwiseAccumulator<Real> acc;
    for (int k = 2; k <= r; ++k) {
        pw *= step;
        acc += c[k] * pw;
    }
    EvalResult<Real> out;
    out.value = low ? Real(acc.value() - log(x) - t.gamma() * x) : Real(acc.value() + t.gamma() * y);
    out.error_bound = pow2<Real>(-n);
    out.terms_used = r - 1;
    return out;
}

/// psi(x) on (0,1) from Euler's series at 1.
template <class Real>
EvalResult<Real> digamma(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    if (p.whole() != 0 || p.is_integer()) throw DomainError("digamma: x must lie in (0,1)");
    const Real& x = p.frac();
    const Real& y = p.one_minus_frac();
    const bool low = x < y;
    const Real& z = low ? x : y;
    const int r = detail::euler_series_length(z, low ? y : x, n) + 1;
    detail::require_table(t, r, n);
    const auto c = t.digamma_coefficients();
    // low:  psi(x) = -1/x - gamma + sum zeta(k) (-1)^k x^{k-1}
    // high: psi(x) = -gamma - sum zeta(k) y^{k-1}
    const Real step = low ? Real(-z) : z;
    Real pw = Real(1);
    PairwiseAccumulator<Real> acc;
    for (int k = 2; k <= r; ++k) {
        pw *= step;
        acc += c[k] * pw;
    }
    EvalResult<Real> out;
    out.value = low ? Real(-acc.value() - 1 / x - t.gamma()) : Real(-acc.value() - t.gamma());
    out.error_bound = pow2<Real>(-n);
    out.terms_used = r - 1;
    return out;
}

/// log Gamma(x) - log Gamma(1-x) on (0,1): only odd Euler terms survive,
///     -log u - 2 gamma u - 2 sum_{k odd >= 3} zeta(k)/k u^k,  u = min(x, 1-x),
/// with the sign flipped when x > 1/2.
template <class Real>
EvalResult<Real> log_gamma_antisym(const DomainPoint<Real>& p, int n, const CoefficientTable<Real>& t) {
    using std::log;
    if (p.whole() != 0 || p.is_integer()) throw DomainError("log_gamma_antisym: x must lie in (0,1)");
    EvalResult<Real> out;
    if (p.frac_is_half()) return out;
    const bool low = p.frac() < p.one_minus_frac();
    const Real& u = low ? p.frac() : p.one_minus_frac();
    const int r = detail::euler_series_length(u, low ? p.one_minus_frac() : p.frac(), n + 1);
    detail::require_table(t, r, n);
    const auto c = t.loggamma_coefficients();
    const Real u2 = u * u;
    Real pw = u;
    PairwiseAccumulator<Real> acc;
    int terms = 0;
    for (int k = 3; k <= r; k += 2) {
        pw *= u2;
        acc += c[k] * pw;
        ++terms;
    }
    const Real v = -log(u) - 2 * t.gamma() * u - 2 * acc.value();
    out.value = low ? v : Real(-v);
    out.error_bound = pow2<Real>(-n);
    out.terms_used = terms;
    return out;
}

}  // namespace ekscan
