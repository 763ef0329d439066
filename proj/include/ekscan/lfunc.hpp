#pragma once

// L'/L(1, chi) for every non-principal character mod a prime q, and the
// Euler-Kronecker aggregates built from them.
//
// Characters: chi_j(g^k) = e^{2 pi i jk/(q-1)}, g the smallest primitive root;
// chi_j(-1) = (-1)^j. Sums over chi-bar are read from the forward spectrum
// at the reflected index.

#include "ekscan/transform.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace ekscan {

inline constexpr std::uint64_t kDefaultMaxModulus = 50'000'000'000ULL;

struct PrimeContext {
    std::uint64_t q = 0;
    std::uint64_t g = 0;
    std::uint64_t N = 0;  // (q-1)/2
    std::vector<std::uint64_t> index_seq;  // a_k = g^k mod q, k < q-1
};

PrimeContext prime_context(std::uint64_t q, std::uint64_t max_q = kDefaultMaxModulus);

/// Length-N sequences at a_k/q, rounded to transform precision:
///   xk    = 2 a_k/q - 1
///   ySym  = log Gamma(a/q) + log Gamma(1 - a/q) - log pi = -log sin(pi a/q)
///   zAnti = log Gamma(a/q) - log Gamma(1 - a/q)
///   sSym  = S(a/q) + S(1 - a/q)
struct SequenceBundle {
    std::uint64_t q = 0;
    int bits = 0;
    std::vector<TransformReal> xk, ySym, zAnti, sSym;
    TransformReal zeta_second_zero = 0;  // for the principal-slot check
};

SequenceBundle build_sequences(const PrimeContext& ctx, int bits);

struct CharacterSpectrum {
    std::uint64_t q = 0;
    /// values[j] = L'/L(1, chi_j); slot 0 (principal) is left at zero.
    std::vector<Complex> values;
    /// Propagated absolute error estimate per slot.
    std::vector<TransformReal> error;
    /// Largest relative deviation of the principal-slot sums from their
    /// closed forms.
    TransformReal principal_residual = 0;
    bool even(std::uint64_t j) const { return j % 2 == 0; }
};

/// Decimation-in-frequency route: two length-(q-1)/2 transforms (a packed
/// real pair and a packed twiddled pair).
CharacterSpectrum lderiv_spectrum_S(const PrimeContext& ctx, const SequenceBundle& bundle,
                                    const TransformPlan* half_plan = nullptr);

/// All-character route through T and digamma with one length-(q-1) transform.
CharacterSpectrum lderiv_spectrum_T(const PrimeContext& ctx, int bits);

struct EKRecord {
    std::uint64_t q = 0;
    double gq = 0, gqPlus = 0;
    double mOdd = 0, mEven = 0, mq = 0;
    std::uint64_t argmaxJ = 0;
    double vq = std::numeric_limits<double>::quiet_NaN();
    double errEstimate = 0;
};

/// Imaginary parts must cancel to below this before they are dropped.
inline constexpr double kImagTolerance = 1e-10;

EKRecord ek_aggregate(const CharacterSpectrum& spectrum, const PrimeContext& ctx);

/// Largest |difference| between two spectra over the non-principal slots.
TransformReal max_spectrum_difference(const CharacterSpectrum& a, const CharacterSpectrum& b);

}  // namespace ekscan
