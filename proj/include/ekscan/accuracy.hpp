#pragma once

// FFT error model: Delta(N, eps) = 0.6 eps sqrt(log2 N), closed-form norms of
// the transformed sequences and round-trip audits against
//   E2 < Delta(2+Delta) |w|_2,   Einf < Delta(2+Delta) sqrt(N) |w|_inf.

#include "ekscan/lfunc.hpp"
#include "ekscan/primes.hpp"
#include "ekscan/transform.hpp"

#include <map>
#include <span>
#include <string>

namespace ekscan {

/// Unit roundoff of the transform storage type (64-bit mantissa).
inline constexpr long double kTransformEps = 0x1p-64L;

long double delta(long double n, long double eps = kTransformEps);

struct ClosedFormNorms {
    long double x_l2 = 0;   // sqrt((q-1)(q-2)/(6q))
    long double y_inf = 0;  // -log sin(pi/q)
    long double z_inf = 0;  // 2 log Gamma(1/q) - log(pi/sin(pi/q))
    long double w_inf = 0;  // S(1/q) + S(1-1/q)
};

ClosedFormNorms norm_closed_forms(std::uint64_t q, int bits = 128);

struct NormPair {
    long double l2 = 0, linf = 0;
};

NormPair norms(std::span<const TransformReal> v);

struct RoundTrip {
    long double e2 = 0, einf = 0, rel_e2 = 0;
    long double bound2 = 0, bound_inf = 0;
    bool within() const { return e2 <= bound2 && einf <= bound_inf; }
};

/// Measures |F^-1(F(seq)) - seq| with the given forward plan (an inverse plan
/// of the same length is built internally). Never throws on a violation; see
/// AccuracyReport::enforce.
RoundTrip roundtrip_audit(std::span<const TransformReal> seq, const TransformPlan& forward,
                          long double eps = kTransformEps);

struct AccuracyReport {
    std::uint64_t q = 0;
    std::size_t N = 0;
    long double eps = kTransformEps;
    long double delta = 0;
    std::map<std::string, NormPair> norms;
    std::map<std::string, RoundTrip> round_trip;
    bool passed() const;
    /// Throws AuditFailure naming each sequence whose error exceeds its bound.
    void enforce() const;
};

/// Round-trip audit of the four length-(q-1)/2 sequences x, y, z, w.
AccuracyReport audit_sequences(const SequenceBundle& bundle, const TransformPlan* forward = nullptr,
                               long double eps = kTransformEps);

}  // namespace ekscan
