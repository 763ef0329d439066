#include "ekscan/lfunc.hpp"

#include "ekscan/primes.hpp"
#include "ekscan/specfun.hpp"
#include "ekscan/summation.hpp"
#include "ekscan/table_cache.hpp"

#include <cmath>
#include <numbers>

namespace ekscan {

namespace {

using LD = TransformReal;

LD euler_gamma() { return std::numbers::egamma_v<LD>; }
LD log_two_pi() { return std::log(2 * std::numbers::pi_v<LD>); }

/// 0.6 eps sqrt(log2 n) at storage precision.
LD fft_delta(std::size_t n) {
    if (n < 2) return 0;
    return LD(0.6) * std::ldexp(LD(1), -64) * std::sqrt(std::log2(static_cast<LD>(n)));
}

LD l2norm(std::span<const LD> v) {
    PairwiseAccumulator<LD> acc;
    for (auto x : v) acc += x * x;
    return std::sqrt(acc.value());
}

template <class Real>
SequenceBundle build_sequences_t(const PrimeContext& ctx, int bits, const CoefficientTable<Real>& t) {
    using std::log;
    using std::sin;
    SequenceBundle b;
    b.q = ctx.q;
    b.bits = bits;
    b.zeta_second_zero = narrow<LD>(t.zeta_second_zero());
    const std::size_t n = ctx.N;
    b.xk.resize(n);
    b.ySym.resize(n);
    b.zAnti.resize(n);
    b.sSym.resize(n);
    const auto q = static_cast<std::int64_t>(ctx.q);
    for (std::size_t k = 0; k < n; ++k) {
        const auto a = static_cast<std::int64_t>(ctx.index_seq[k]);
        const auto p = DomainPoint<Real>::from_ratio(a, q);
        b.xk[k] = static_cast<LD>(2 * a - q) / static_cast<LD>(q);
        const Real near = Real(std::min(a, q - a)) / Real(q);
        b.ySym[k] = narrow<LD>(Real(-log(sin(t.pi() * near))));
        b.zAnti[k] = narrow<LD>(log_gamma_antisym(p, bits, t).value);
        b.sSym[k] = narrow<LD>(s_reflect_sum(p, bits, t).value);
    }
    return b;
}

struct TSequences {
    std::vector<LD> t, psi;
};

template <class Real>
TSequences build_t_sequences(const PrimeContext& ctx, int bits, const CoefficientTable<Real>& t) {
    TSequences s;
    const std::size_t n = ctx.q - 1;
    s.t.resize(n);
    s.psi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto p = DomainPoint<Real>::from_ratio(static_cast<std::int64_t>(ctx.index_seq[k]),
                                                     static_cast<std::int64_t>(ctx.q));
        s.t[k] = narrow<LD>(deninger_t(p, bits, t).value);
        s.psi[k] = narrow<LD>(digamma(p, bits, t).value);
    }
    return s;
}

/// Error of a quotient num/den given absolute errors of both parts.
LD quotient_error(const Complex& num, const Complex& den, LD dnum, LD dden) {
    const LD an = std::abs(num), ad = std::abs(den);
    if (ad == 0) return std::numeric_limits<LD>::infinity();
    return (dnum + an * dden / ad) / ad;
}

void require_nonzero(const Complex& den, LD scale, std::uint64_t j, const char* what) {
    if (!(std::abs(den) > scale * std::ldexp(LD(1), -60)))
        throw SingularityError(std::string("vanishing ") + what + " for character " + std::to_string(j),
                               static_cast<long long>(j));
}

}  // namespace

PrimeContext prime_context(std::uint64_t q, std::uint64_t max_q) {
    if (q < 3 || q % 2 == 0 || !is_prime_u64(q)) throw DomainError(std::to_string(q) + " is not an odd prime");
    if (q > max_q) throw ResourceError("modulus " + std::to_string(q) + " exceeds configured maximum");
    PrimeContext c;
    c.q = q;
    c.g = smallest_primitive_root(q);
    c.N = (q - 1) / 2;
    c.index_seq.resize(q - 1);
    std::uint64_t a = 1;
    for (std::uint64_t k = 0; k < q - 1; ++k) {
        c.index_seq[k] = a;
        a = mul_mod(a, c.g, q);
    }
    return c;
}

SequenceBundle build_sequences(const PrimeContext& ctx, int bits) {
    return dispatch_scalar(bits, [&](auto zero) {
        using Real = decltype(zero);
        return build_sequences_t<Real>(ctx, bits, *shared_table<Real>(bits));
    });
}

CharacterSpectrum lderiv_spectrum_S(const PrimeContext& ctx, const SequenceBundle& b, const TransformPlan* half_plan) {
    const std::size_t n = ctx.N;
    if (b.q != ctx.q || b.sSym.size() != n) throw ContractError("sequence bundle does not match prime context");
    TransformPlan local;
    if (!half_plan) {
        local = plan(n, Direction::Forward);
        half_plan = &local;
    }
    const auto sy = forward_real_pair(*half_plan, b.sSym, b.ySym);
    const auto zx = twiddled_half_transform_pair(b.zAnti, b.xk, ctx.q, *half_plan);
    const auto& FS = sy.first;
    const auto& FY = sy.second;
    const auto& TZ = zx.first;
    const auto& TX = zx.second;

    // per-coefficient error: transform model plus sequence truncation
    const LD delta = fft_delta(n);
    const LD seq_err = std::ldexp(LD(1), -b.bits) * static_cast<LD>(n);
    const LD nS = l2norm(b.sSym), nY = l2norm(b.ySym), nZ = l2norm(b.zAnti), nX = l2norm(b.xk);
    const LD dS = delta * nS + seq_err, dY = delta * nY + seq_err;
    const LD dZ = delta * nZ + seq_err, dX = delta * nX;

    CharacterSpectrum sp;
    sp.q = ctx.q;
    sp.values.assign(ctx.q - 1, Complex(0));
    sp.error.assign(ctx.q - 1, 0);
    const LD c = euler_gamma() + log_two_pi();
    for (std::size_t m = 1; m < n; ++m) {  // even j = 2m
        const std::size_t idx = n - m, j = 2 * m;
        require_nonzero(FY[idx], nY, j, "log-gamma sum");
        sp.values[j] = c - FS[idx] / FY[idx] / LD(2);
        sp.error[j] = quotient_error(FS[idx], FY[idx], dS, dY) / 2;
    }
    for (std::size_t m = 0; m < n; ++m) {  // odd j = 2m+1
        const std::size_t idx = n - 1 - m, j = 2 * m + 1;
        require_nonzero(TX[idx], nX, j, "Bernoulli number B_1");
        sp.values[j] = c + TZ[idx] / TX[idx];
        sp.error[j] = quotient_error(TZ[idx], TX[idx], dZ, dX);
    }

    // principal slot: sum_a S(a/q) and sum_a log Gamma(a/q) in closed form
    const LD q = static_cast<LD>(ctx.q), lq = std::log(q);
    const LD s_closed = -lq * lq / 2 - lq * log_two_pi() - (q - 1) * b.zeta_second_zero;
    const LD y_closed = static_cast<LD>(n) * std::log(LD(2)) - lq / 2;
    sp.principal_residual = std::max(std::abs(FS[0] - s_closed) / std::max(LD(1), std::abs(s_closed)),
                                     std::abs(FY[0] - y_closed) / std::max(LD(1), std::abs(y_closed)));
    return sp;
}

CharacterSpectrum lderiv_spectrum_T(const PrimeContext& ctx, int bits) {
    const TSequences s = dispatch_scalar(bits, [&](auto zero) {
        using Real = decltype(zero);
        return build_t_sequences<Real>(ctx, bits, *shared_table<Real>(bits));
    });
    const std::size_t n = ctx.q - 1;
    const auto p = plan(n, Direction::Forward);
    const auto tp = forward_real_pair(p, s.t, s.psi);
    const LD delta = fft_delta(n);
    const LD seq_err = std::ldexp(LD(1), -bits) * static_cast<LD>(n);
    const LD nP = l2norm(s.psi);
    const LD dT = delta * l2norm(s.t) + seq_err, dP = delta * nP + seq_err;

    CharacterSpectrum sp;
    sp.q = ctx.q;
    sp.values.assign(n, Complex(0));
    sp.error.assign(n, 0);
    const LD lq = std::log(static_cast<LD>(ctx.q));
    for (std::size_t j = 1; j < n; ++j) {
        require_nonzero(tp.second[j], nP, j, "digamma sum");
        sp.values[j] = -lq - tp.first[j] / tp.second[j];
        sp.error[j] = quotient_error(tp.first[j], tp.second[j], dT, dP);
    }
    const LD q = static_cast<LD>(ctx.q);
    const LD psi_closed = -(q - 1) * euler_gamma() - q * lq;
    sp.principal_residual = std::abs(tp.second[0] - psi_closed) / std::abs(psi_closed);
    return sp;
}

EKRecord ek_aggregate(const CharacterSpectrum& sp, const PrimeContext& ctx) {
    if (sp.q != ctx.q || sp.values.size() != ctx.q - 1) throw ContractError("spectrum does not match prime context");
    PairwiseAccumulator<LD> re_all, im_all, re_even, im_even, err;
    LD m_odd = 0, m_even = 0, m_all = -1;
    std::uint64_t argmax = 0;
    for (std::uint64_t j = 1; j < ctx.q - 1; ++j) {
        const Complex v = sp.values[j];
        re_all += v.real();
        im_all += v.imag();
        err += sp.error[j];
        const LD a = std::abs(v);
        if (j % 2 == 0) {
            re_even += v.real();
            im_even += v.imag();
            m_even = std::max(m_even, a);
        } else {
            m_odd = std::max(m_odd, a);
        }
        if (a > m_all) {
            m_all = a;
            argmax = j;
        }
    }
    const LD im = std::max(std::abs(im_all.value()), std::abs(im_even.value()));
    if (!(im < kImagTolerance))
        throw ContractError("imaginary parts do not cancel for q = " + std::to_string(ctx.q) +
                            ": residual " + to_string(static_cast<double>(im), 6));
    EKRecord r;
    r.q = ctx.q;
    r.gq = static_cast<double>(euler_gamma() + re_all.value());
    r.gqPlus = static_cast<double>(euler_gamma() + re_even.value());
    r.mOdd = static_cast<double>(m_odd);
    r.mEven = static_cast<double>(m_even);
    r.mq = static_cast<double>(std::max(m_odd, m_even));
    r.argmaxJ = argmax;
    r.errEstimate = static_cast<double>(err.value());
    return r;
}

TransformReal max_spectrum_difference(const CharacterSpectrum& a, const CharacterSpectrum& b) {
    if (a.q != b.q || a.values.size() != b.values.size()) throw ContractError("spectra for different moduli");
    LD worst = 0;
    for (std::size_t j = 1; j < a.values.size(); ++j) worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
    return worst;
}

}  // namespace ekscan
