#include "ekscan/accuracy.hpp"

#include "ekscan/specfun.hpp"
#include "ekscan/summation.hpp"
#include "ekscan/table_cache.hpp"

#include <cmath>

namespace ekscan {

long double delta(long double n, long double eps) {
    if (n < 2 || eps <= 0) throw DomainError("delta needs N >= 2 and eps > 0");
    return 0.6L * eps * std::sqrt(std::log2(n));
}

ClosedFormNorms norm_closed_forms(std::uint64_t q, int bits) {
    if (q < 3 || !is_prime_u64(q)) throw DomainError(std::to_string(q) + " is not an odd prime");
    return dispatch_scalar(bits, [&](auto zero) {
        using Real = decltype(zero);
        using std::log;
        using std::sin;
        using std::sqrt;
        const auto& t = *shared_table<Real>(bits);
        const auto qi = static_cast<std::int64_t>(q);
        const Real qr(qi);
        const Real s = sin(t.pi() / qr);
        const auto p = DomainPoint<Real>::from_ratio(1, qi);
        ClosedFormNorms c;
        c.x_l2 = narrow<long double>(Real(sqrt((qr - 1) * (qr - 2) / (6 * qr))));
        c.y_inf = narrow<long double>(Real(-log(s)));
        c.z_inf = narrow<long double>(Real(2 * log_gamma(p, bits, t).value - log(t.pi() / s)));
        c.w_inf = narrow<long double>(s_reflect_sum(p, bits, t).value);
        return c;
    });
}

NormPair norms(std::span<const TransformReal> v) {
    PairwiseAccumulator<long double> acc;
    NormPair n;
    for (auto x : v) {
        acc += x * x;
        n.linf = std::max(n.linf, std::abs(x));
    }
    n.l2 = std::sqrt(acc.value());
    return n;
}

RoundTrip roundtrip_audit(std::span<const TransformReal> seq, const TransformPlan& forward, long double eps) {
    const std::size_t n = seq.size();
    if (forward.length() != n || forward.direction() != Direction::Forward)
        throw ContractError("round-trip audit needs a forward plan of the sequence length");
    RoundTrip r;
    if (n < 2) return r;
    for (auto x : seq)
        if (!std::isfinite(x)) throw DomainError("round-trip audit of a non-finite sequence");
    PlanOptions opts;
    opts.arithmetic = forward.arithmetic();
    const auto inverse = plan(n, Direction::Inverse, opts);
    std::vector<Complex> data(seq.begin(), seq.end());
    TransformScratch scratch(forward);
    execute(forward, data, scratch);
    execute(inverse, data, scratch);
    PairwiseAccumulator<long double> acc;
    for (std::size_t k = 0; k < n; ++k) {
        const long double e = std::abs(data[k] - Complex(seq[k]));
        acc += e * e;
        r.einf = std::max(r.einf, e);
    }
    r.e2 = std::sqrt(acc.value());
    const auto nm = norms(seq);
    r.rel_e2 = nm.l2 > 0 ? r.e2 / nm.l2 : 0;
    const long double d = delta(static_cast<long double>(n), eps);
    r.bound2 = d * (2 + d) * nm.l2;
    r.bound_inf = d * (2 + d) * std::sqrt(static_cast<long double>(n)) * nm.linf;
    return r;
}

bool AccuracyReport::passed() const {
    for (const auto& [name, r] : round_trip)
        if (!r.within()) return false;
    return true;
}

void AccuracyReport::enforce() const {
    std::string bad;
    for (const auto& [name, r] : round_trip) {
        if (r.within()) continue;
        bad += " " + name + " (E2 " + to_string(static_cast<double>(r.e2), 4) + " vs " +
               to_string(static_cast<double>(r.bound2), 4) + ", Einf " + to_string(static_cast<double>(r.einf), 4) +
               " vs " + to_string(static_cast<double>(r.bound_inf), 4) + ")";
    }
    if (!bad.empty()) throw AuditFailure("round-trip bound exceeded for q = " + std::to_string(q) + ":" + bad);
}

AccuracyReport audit_sequences(const SequenceBundle& b, const TransformPlan* forward, long double eps) {
    AccuracyReport rep;
    rep.q = b.q;
    rep.N = b.xk.size();
    rep.eps = eps;
    if (rep.N < 2) return rep;
    rep.delta = delta(static_cast<long double>(rep.N), eps);
    TransformPlan local;
    if (!forward) {
        local = plan(rep.N, Direction::Forward);
        forward = &local;
    }
    const std::pair<const char*, const std::vector<TransformReal>*> seqs[] = {
        {"x", &b.xk}, {"y", &b.ySym}, {"z", &b.zAnti}, {"w", &b.sSym}};
    for (const auto& [name, v] : seqs) {
        rep.norms[name] = norms(*v);
        rep.round_trip[name] = roundtrip_audit(*v, *forward, eps);
    }
    return rep;
}

}  // namespace ekscan
