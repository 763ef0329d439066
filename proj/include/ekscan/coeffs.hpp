#pragma once

// Scalar constants and the Taylor-coefficient table
//
//     L(k) = zeta(k) H_{k-1} + zeta'(k),   k >= 2,
//
// shared by every series evaluator. Values are built once at BuildReal
// precision and narrowed to the evaluation scalar.

#include "ekscan/error.hpp"
#include "ekscan/scalar.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ekscan {

using Rational = bmp::mpq_rational;
using BigInt = bmp::mpz_int;

/// Target absolute error 2^-bits for series evaluations.
class Precision {
public:
    static constexpr int kMinBits = 16;
    static constexpr int kDefaultMaxBits = 256;

    explicit Precision(int bits, int max_bits = kDefaultMaxBits) : bits_(bits) {
        if (bits < kMinBits || bits > max_bits)
            throw DomainError("precision must be in [" + std::to_string(kMinBits) + ", " +
                              std::to_string(max_bits) + "] bits, got " + std::to_string(bits));
    }
    int bits() const { return bits_; }
    /// Table length needed for every evaluator at this precision.
    int table_length() const { return bits_ + 32; }

    friend bool operator==(Precision, Precision) = default;

private:
    int bits_;
};

// ---------------------------------------------------------------------------
// exact and elementary pieces

/// Exact Bernoulli number B_k (B_1 = -1/2). Throws ResourceError when the
/// rational would exceed the limb budget.
Rational bernoulli(int k);

/// Upper bound on numerator+denominator size of cached Bernoulli numbers.
inline constexpr std::size_t kBernoulliBitBudget = std::size_t{1} << 22;

template <class Real>
Real to_real(const Rational& r) {
    if constexpr (std::is_floating_point_v<Real>) {
        // numerator and denominator may individually overflow a double, so
        // go through an MPFR intermediate
        return Mp100(r).template convert_to<Real>();
    } else {
        return Real(r);
    }
}

/// H_m by forward recurrence.
template <class Real>
Real harmonic(int m) {
    if (m < 0) throw DomainError("harmonic: m must be non-negative");
    Real h{0};
    for (int j = 1; j <= m; ++j) h += Real(1) / j;
    return h;
}

/// zeta(2l) = (-1)^(l+1) B_{2l} (2 pi)^{2l} / (2 (2l)!).
template <class Real>
Real zeta_even(int two_l) {
    if (two_l < 2 || two_l % 2 != 0) throw DomainError("zeta_even: argument must be even and >= 2");
    const Rational b = bernoulli(two_l);
    // B_{2l}/(2l)! is a modest rational; (2 pi)^{2l} is formed in floating point
    Rational q = b;
    BigInt fact = 1;
    for (int i = 2; i <= two_l; ++i) fact *= i;
    q /= Rational(fact);
    q /= 2;
    using std::pow;
    Real v = to_real<Real>(q) * pow(2 * pi_v<Real>(), two_l);
    return ((two_l / 2) % 2 == 1) ? v : Real(-v);
}

/// Euler-Maclaurin cutoff used when none is supplied.
inline int default_em_cutoff(int k, int bits) {
    const int e = (bits + k - 1) / k;
    const int n = e >= 7 ? 128 : (1 << e);
    return n < 32 ? 32 : (n > 64 ? 64 : n);
}

/// zeta(k) by Euler-Maclaurin with cutoff N; correction terms are added until
/// their magnitude drops below 2^-(bits+8).
template <class Real>
Real zeta_em(int k, int bits, int cutoff = 0) {
    if (k < 2) throw DomainError("zeta_em: k must be >= 2");
    const int n_cut = cutoff > 0 ? cutoff : default_em_cutoff(k, bits);
    using std::abs;
    using std::pow;
    Real direct{0};
    for (int n = n_cut - 1; n >= 1; --n) direct += pow(Real(n), -k);
    const Real N(n_cut);
    const Real n_pow = pow(N, -k);  // N^-k
    Real s = direct + N * n_pow / (k - 1) + n_pow / 2;
    const Real tol = pow2<Real>(-(bits + 8));
    // term_j = B_{2j}/(2j)! * k (k+1) ... (k+2j-2) * N^{-k-2j+1}
    Real rising = Real(k);             // k..k+2j-2 product for j = 1
    Real fact = Real(2);               // (2j)!
    Real npow = n_pow / N;             // N^{-k-2j+1}
    Real prev = Real(0);
    for (int j = 1;; ++j) {
        const Real term = to_real<Real>(bernoulli(2 * j)) / fact * rising * npow;
        if (abs(term) < tol) break;
        if (j > 1 && abs(term) > abs(prev))
            throw ResourceError("zeta_em: asymptotic series diverged before reaching tolerance");
        s += term;
        prev = term;
        rising *= Real(k + 2 * j - 1) * Real(k + 2 * j);
        fact *= Real(2 * j + 1) * Real(2 * j + 2);
        npow /= N * N;
    }
    return s;
}

/// zeta(k) - 1 = sum_{n>=2} n^-k with relative error about 2^-(bits+8); the
/// remainder tolerance scales with the 2^-k size of the result.
template <class Real>
Real zeta_minus_one(int k, int bits, int cutoff = 0) {
    if (k < 2) throw DomainError("zeta_minus_one: k must be >= 2");
    const int n_cut = cutoff > 0 ? cutoff : default_em_cutoff(k, bits);
    using std::abs;
    using std::pow;
    Real direct{0};
    for (int n = n_cut - 1; n >= 2; --n) direct += pow(Real(n), -k);
    const Real N(n_cut);
    const Real n_pow = pow(N, -k);
    Real s = direct + N * n_pow / (k - 1) + n_pow / 2;
    const Real tol = pow2<Real>(-(bits + 8 + k));
    Real rising = Real(k);
    Real fact = Real(2);
    Real npow = n_pow / N;
    Real prev = Real(0);
    for (int j = 1;; ++j) {
        const Real term = to_real<Real>(bernoulli(2 * j)) / fact * rising * npow;
        if (abs(term) < tol) break;
        if (j > 1 && abs(term) > abs(prev))
            throw ResourceError("zeta_minus_one: asymptotic series diverged before reaching tolerance");
        s += term;
        prev = term;
        rising *= Real(k + 2 * j - 1) * Real(k + 2 * j);
        fact *= Real(2 * j + 1) * Real(2 * j + 2);
        npow /= N * N;
    }
    return s;
}

/// zeta'(k) by differentiating the Euler-Maclaurin formula in s.
template <class Real>
Real zeta_prime_em(int k, int bits, int cutoff = 0) {
    if (k < 2) throw DomainError("zeta_prime_em: k must be >= 2");
    const int n_cut = cutoff > 0 ? cutoff : default_em_cutoff(k, bits);
    using std::abs;
    using std::log;
    using std::pow;
    Real direct{0};
    for (int n = n_cut - 1; n >= 2; --n) direct -= log(Real(n)) * pow(Real(n), -k);
    const Real N(n_cut);
    const Real logN = log(N);
    const Real n_pow = pow(N, -k);
    const Real km1 = Real(k - 1);
    Real s = direct - N * n_pow * (logN / km1 + 1 / (km1 * km1)) - logN * n_pow / 2;
    const Real tol = pow2<Real>(-(bits + 8));
    Real rising = Real(k);
    Real recip_sum = Real(1) / k;  // sum_{i=0}^{2j-2} 1/(k+i)
    Real fact = Real(2);
    Real npow = n_pow / N;
    Real prev = Real(0);
    for (int j = 1;; ++j) {
        const Real term =
            to_real<Real>(bernoulli(2 * j)) / fact * rising * npow * (recip_sum - logN);
        if (abs(term) < tol) break;
        if (j > 1 && abs(term) > abs(prev))
            throw ResourceError("zeta_prime_em: asymptotic series diverged before reaching tolerance");
        s += term;
        prev = term;
        rising *= Real(k + 2 * j - 1) * Real(k + 2 * j);
        recip_sum += Real(1) / (k + 2 * j - 1) + Real(1) / (k + 2 * j);
        fact *= Real(2 * j + 1) * Real(2 * j + 2);
        npow /= N * N;
    }
    return s;
}

/// zeta(k): closed form for even k, Euler-Maclaurin for odd k.
template <class Real>
Real zeta(int k, int bits) {
    if (k < 2) throw DomainError("zeta: k must be >= 2");
    return (k % 2 == 0) ? zeta_even<Real>(k) : zeta_em<Real>(k, bits);
}

template <class Real>
Real zeta_prime(int k, int bits) {
    return zeta_prime_em<Real>(k, bits);
}

// ---------------------------------------------------------------------------
// coefficient table

template <class Real>
class CoefficientTable {
public:
    /// Builds every entry at BuildReal precision and narrows to Real.
    /// `min_index` extends the table beyond p.table_length().
    static CoefficientTable build(Precision p, int min_index = 0);

    /// Reads a cache file; nullopt when absent, unreadable, or built for a
    /// different precision, scalar width or format version.
    static std::optional<CoefficientTable> load(const std::filesystem::path& path, Precision p);
    void save(const std::filesystem::path& path) const;
    /// load() falling back to build() + save().
    static CoefficientTable load_or_build(const std::filesystem::path& path, Precision p);

    Precision precision() const { return precision_; }
    int bits() const { return precision_.bits(); }
    int max_index() const { return max_index_; }

    const Real& L(int k) const { return at(L_, k); }
    const Real& zeta(int k) const { return at(zeta_, k); }
    /// zeta(k) - 1, stored separately so that it keeps its relative precision.
    const Real& zeta_minus_one(int k) const { return at(zeta_tail_, k); }
    const Real& zeta_prime(int k) const { return at(zeta_prime_, k); }
    const Real& zeta_even(int two_l) const {
        if (two_l % 2 != 0) throw DomainError("zeta_even: odd index");
        return at(zeta_, two_l);
    }
    const Real& harmonic(int m) const {
        if (m < 0 || m >= static_cast<int>(harmonic_.size()))
            throw ResourceError("harmonic index outside table");
        return harmonic_[m];
    }

    const Real& gamma() const { return gamma_; }
    const Real& gamma1() const { return gamma1_; }
    const Real& zeta_second_zero() const { return zeta_second_zero_; }
    const Real& pi() const { return pi_; }
    const Real& log2() const { return log2_; }
    const Real& log_pi() const { return log_pi_; }

    /// 2 L(k)/k, the S-series coefficients, indexed by k.
    std::span<const Real> s_coefficients() const { return s_coeff_; }
    /// 2 L(2l)/l, the reflection-sum coefficients, indexed by l.
    std::span<const Real> reflect_coefficients() const { return refl_coeff_; }
    /// L(k), the T-series coefficients, indexed by k.
    std::span<const Real> t_coefficients() const { return L_; }
    /// zeta(k)/k, the log-gamma coefficients, indexed by k.
    std::span<const Real> loggamma_coefficients() const { return zeta_over_k_; }
    /// zeta(k), the digamma coefficients, indexed by k.
    std::span<const Real> digamma_coefficients() const { return zeta_; }

    template <class Other>
    CoefficientTable<Other> cast() const;

    /// Raw constructor used by build/load/cast; fills the derived arrays.
    CoefficientTable(Precision p, std::vector<Real> zeta_minus_one, std::vector<Real> zeta_prime,
                     Real gamma, Real gamma1);

private:
    template <class>
    friend class CoefficientTable;

    const Real& at(const std::vector<Real>& v, int k) const {
        if (k < 2 || k > max_index_)
            throw ResourceError("coefficient index " + std::to_string(k) + " outside table [2, " +
                                std::to_string(max_index_) + "]");
        return v[k];
    }

    Precision precision_;
    int max_index_;
    std::vector<Real> zeta_tail_, zeta_, zeta_prime_, L_, harmonic_;
    std::vector<Real> s_coeff_, refl_coeff_, zeta_over_k_;
    Real gamma_, gamma1_, zeta_second_zero_;
    Real pi_, log2_, log_pi_;
};

/// gamma_1 = -(log 2)^2/2 + sum_{l=1}^{n/2+1} L(2l+1)/((2l+1) 4^l), error
/// below 2^(1-n).
template <class Real>
Real gamma1_fast(const CoefficientTable<Real>& t, int n) {
    if (n < 16) throw DomainError("gamma1_fast: n must be >= 16");
    const int top = n / 2 + 1;
    if (2 * top + 1 > t.max_index()) throw ResourceError("gamma1_fast: table too short for n");
    Real quarter_pow = Real(1);
    Real s{0};
    for (int l = 1; l <= top; ++l) {
        quarter_pow /= 4;
        s += t.L(2 * l + 1) / (2 * l + 1) * quarter_pow;
    }
    const Real ln2 = t.log2();
    return s - ln2 * ln2 / 2;
}

/// gamma = 1/2 - (log 2)/2 + (2 log 2)^-1 sum_{l=1}^{n/2+4} L(2l+1)/4^l,
/// error below 2^(2-n).
template <class Real>
Real gamma_fast(const CoefficientTable<Real>& t, int n) {
    if (n < 16) throw DomainError("gamma_fast: n must be >= 16");
    const int top = n / 2 + 4;
    if (2 * top + 1 > t.max_index()) throw ResourceError("gamma_fast: table too short for n");
    Real quarter_pow = Real(1);
    Real s{0};
    for (int l = 1; l <= top; ++l) {
        quarter_pow /= 4;
        s += t.L(2 * l + 1) * quarter_pow;
    }
    const Real ln2 = t.log2();
    return Real(1) / 2 - ln2 / 2 + s / (2 * ln2);
}

/// zeta''(0) = (-(log 2 pi)^2 - pi^2/12 + 2 gamma_1 + gamma^2) / 2.
template <class Real>
Real zeta_second_zero_from(const Real& gamma, const Real& gamma1) {
    using std::log;
    const Real p = pi_v<Real>();
    const Real l2p = log(2 * p);
    return (-l2p * l2p - p * p / 12 + 2 * gamma1 + gamma * gamma) / 2;
}

// ---------------------------------------------------------------------------
// implementation

template <class Real>
CoefficientTable<Real>::CoefficientTable(Precision p, std::vector<Real> tail_v,
                                         std::vector<Real> zeta_prime_v, Real gamma, Real gamma1)
    : precision_(p),
      max_index_(static_cast<int>(tail_v.size()) - 1),
      zeta_tail_(std::move(tail_v)),
      zeta_prime_(std::move(zeta_prime_v)),
      gamma_(std::move(gamma)),
      gamma1_(std::move(gamma1)) {
    using std::log;
    if (zeta_prime_.size() != zeta_tail_.size() || max_index_ < 3)
        throw ContractError("coefficient arrays have inconsistent lengths");
    zeta_.assign(max_index_ + 1, Real(0));
    for (int k = 2; k <= max_index_; ++k) zeta_[k] = 1 + zeta_tail_[k];
    pi_ = pi_v<Real>();
    log2_ = ln2_v<Real>();
    log_pi_ = log(pi_);
    harmonic_.assign(max_index_ + 1, Real(0));
    for (int m = 1; m <= max_index_; ++m) harmonic_[m] = harmonic_[m - 1] + Real(1) / m;
    L_.assign(max_index_ + 1, Real(0));
    s_coeff_.assign(max_index_ + 1, Real(0));
    zeta_over_k_.assign(max_index_ + 1, Real(0));
    for (int k = 2; k <= max_index_; ++k) {
        L_[k] = zeta_[k] * harmonic_[k - 1] + zeta_prime_[k];
        s_coeff_[k] = 2 * L_[k] / k;
        zeta_over_k_[k] = zeta_[k] / k;
    }
    refl_coeff_.assign(max_index_ / 2 + 1, Real(0));
    for (int l = 1; 2 * l <= max_index_; ++l) refl_coeff_[l] = 2 * L_[2 * l] / l;
    zeta_second_zero_ = zeta_second_zero_from<Real>(gamma_, gamma1_);
}

template <class Real>
CoefficientTable<Real> CoefficientTable<Real>::build(Precision p, int min_index) {
    const int max_index = std::max(p.table_length(), min_index);
    const int bits = p.bits();
    std::vector<BuildReal> z(max_index + 1), zp(max_index + 1);
    for (int k = 2; k <= max_index; ++k) {
        z[k] = ekscan::zeta_minus_one<BuildReal>(k, bits);
        zp[k] = ekscan::zeta_prime<BuildReal>(k, bits);
    }
    // gamma and gamma_1 from the table itself, with 8 guard bits
    CoefficientTable<BuildReal> wide(p, z, zp, BuildReal(0), BuildReal(0));
    BuildReal g = gamma_fast(wide, bits + 8);
    BuildReal g1 = gamma1_fast(wide, bits + 8);
    CoefficientTable<BuildReal> full(p, std::move(z), std::move(zp), std::move(g), std::move(g1));
    if constexpr (std::is_same_v<Real, BuildReal>) {
        return full;
    } else {
        return full.template cast<Real>();
    }
}

template <class Real>
template <class Other>
CoefficientTable<Other> CoefficientTable<Real>::cast() const {
    std::vector<Other> z(zeta_tail_.size()), zp(zeta_prime_.size());
    for (std::size_t i = 0; i < zeta_tail_.size(); ++i) {
        z[i] = narrow<Other>(zeta_tail_[i]);
        zp[i] = narrow<Other>(zeta_prime_[i]);
    }
    return CoefficientTable<Other>(precision_, std::move(z), std::move(zp), narrow<Other>(gamma_),
                                   narrow<Other>(gamma1_));
}

// Cache text format, one value per line as "<name> <index> <hex-mantissa> <exp>"
// with value = mantissa * 2^exp; see README.
namespace cache_detail {

inline constexpr int kFormatVersion = 2;

template <class Real>
std::string encode(const Real& x) {
    using std::frexp;
    using std::ldexp;
    if (x == 0) return "0 0";
    int e = 0;
    Real f = frexp(x, &e);
    const int p = mantissa_bits<Real>;
    Real scaled = ldexp(f, p);  // integer valued, |scaled| < 2^p
    BigInt m;
    if constexpr (std::is_floating_point_v<Real>) {
        const bool neg = scaled < 0;
        m = BigInt(static_cast<unsigned long long>(neg ? -scaled : scaled));
        if (neg) m = -m;
    } else {
        m = scaled.template convert_to<BigInt>();
    }
    const bool neg = m < 0;
    std::string hex = (neg ? BigInt(-m) : m).str(0, std::ios_base::hex);
    return (neg ? "-" : "") + hex + " " + std::to_string(e - p);
}

template <class Real>
Real decode(const std::string& hex, int exp) {
    using std::ldexp;
    const bool neg = !hex.empty() && hex[0] == '-';
    BigInt m("0x" + hex.substr(neg ? 1 : 0));
    Real r;
    if constexpr (std::is_floating_point_v<Real>) {
        r = static_cast<Real>(m.template convert_to<unsigned long long>());
    } else {
        r = Real(m);
    }
    r = ldexp(r, exp);
    return neg ? Real(-r) : r;
}

}  // namespace cache_detail

}  // namespace ekscan

#include "ekscan/detail/coeffs_cache.hpp"
