#include "ekscan/offsets.hpp"

#include <algorithm>

namespace ekscan {

namespace {

struct Coverage {
    std::uint64_t r;
    std::vector<char> seen;
    std::uint64_t used = 0;
};

}  // namespace

OffsetSequence greedy_offsets(std::size_t count) {
    if (count == 0) throw DomainError("offset count must be at least 1");
    OffsetSequence s;
    s.b.reserve(count);
    // r > n can never be covered by n values, so only primes up to count matter
    std::vector<Coverage> cov;
    for (auto r : primes_between(2, std::max<std::uint64_t>(count, 2))) cov.push_back({r, std::vector<char>(r, 0)});
    auto take = [&](std::uint64_t c) {
        for (auto& k : cov) {
            auto& slot = k.seen[c % k.r];
            if (!slot) {
                slot = 1;
                ++k.used;
            }
        }
        s.b.push_back(c);
    };
    take(0);
    std::uint64_t c = 0;
    while (s.b.size() < count) {
        ++c;
        const bool ok = std::all_of(cov.begin(), cov.end(), [&](const Coverage& k) {
            return k.seen[c % k.r] || k.used + 1 < k.r;
        });
        if (ok) take(c);
    }
    return s;
}

bool admissible(std::span<const std::uint64_t> values, std::uint64_t limit) {
    for (auto r : primes_between(2, limit)) {
        std::vector<char> seen(r, 0);
        std::uint64_t used = 0;
        for (auto v : values) {
            auto& slot = seen[v % r];
            if (!slot) ++used;
            slot = 1;
        }
        if (used >= r) return false;
    }
    return true;
}

double m_of(std::span<const std::uint64_t> values) {
    long double m = 0;
    for (auto a : values) {
        if (a == 0) throw DomainError("m(A) needs positive elements");
        m += 1.0L / static_cast<long double>(a);
    }
    return static_cast<double>(m);
}

VScore v_score(std::uint64_t q, const OffsetSequence& seq, std::size_t count) {
    if (q < 3 || !is_prime_u64(q)) throw DomainError(std::to_string(q) + " is not an odd prime");
    VScore s;
    s.q = q;
    long double v = 0;
    const std::size_t last = std::min(count, seq.count());
    for (std::size_t i = 1; i < last; ++i) {  // b(2) .. b(count)
        const BigInt n = BigInt(seq.b[i]) * q + 1;
        const auto r = is_prime(n);
        if (static_cast<int>(r.method) > static_cast<int>(s.method)) {
            s.method = r.method;
            s.rounds = r.rounds;
        } else if (r.method == s.method) {
            s.rounds = std::max(s.rounds, r.rounds);
        }
        if (!r.prime) continue;
        s.contributing.push_back(seq.b[i]);
        v += 1.0L / static_cast<long double>(seq.b[i]);
    }
    s.v = static_cast<double>(v);
    return s;
}

int v_band(double v) {
    if (v <= 0.25) return 0;
    if (v <= 0.5) return 1;
    if (v <= 0.75) return 2;
    if (v <= 1.0) return 3;
    return 4;
}

std::string v_band_label(int band) {
    static const char* names[] = {"v<=0.25", "0.25<v<=0.5", "0.5<v<=0.75", "0.75<v<=1", "v>1"};
    return band >= 0 && band < 5 ? names[band] : "?";
}

}  // namespace ekscan
