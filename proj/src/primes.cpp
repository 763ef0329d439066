#include "ekscan/primes.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace ekscan {

namespace {

constexpr std::uint64_t kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
    a %= n;
    if (a == 0) return true;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool strong_probable_prime(const BigInt& n, const BigInt& a) {
    BigInt d = n - 1;
    unsigned s = 0;
    while (!bmp::bit_test(d, 0)) {
        d >>= 1;
        ++s;
    }
    BigInt x = bmp::powm(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

std::string method_name(PrimalityMethod m) {
    switch (m) {
        case PrimalityMethod::TrialDivision: return "trial-division";
        case PrimalityMethod::DeterministicMR64: return "deterministic-mr-64bit";
        case PrimalityMethod::DeterministicMR13: return "deterministic-mr-13-bases";
        case PrimalityMethod::ProbableMR: return "probable-prime-mr";
    }
    return "?";
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (auto p : kSmallPrimes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;
    for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL})
        if (!strong_probable_prime(n, a)) return false;
    return true;
}

PrimalityResult is_prime(const BigInt& n, int rounds) {
    PrimalityResult r;
    if (n < 2) return r;
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        const auto v = n.convert_to<std::uint64_t>();
        r.prime = is_prime_u64(v);
        r.method = v < 41 * 41 ? PrimalityMethod::TrialDivision : PrimalityMethod::DeterministicMR64;
        r.rounds = r.method == PrimalityMethod::TrialDivision ? 0 : 7;
        return r;
    }
    for (auto p : kSmallPrimes)
        if (n % p == 0) return r;
    static const BigInt kLimit13("3317044064679887385961981");
    if (n < kLimit13) {
        r.method = PrimalityMethod::DeterministicMR13;
        r.rounds = 13;
        r.prime = std::all_of(std::begin(kSmallPrimes), std::end(kSmallPrimes),
                              [&](std::uint64_t a) { return strong_probable_prime(n, BigInt(a)); });
        return r;
    }
    r.method = PrimalityMethod::ProbableMR;
    r.rounds = rounds;
    std::mt19937_64 gen(0x5eedULL);
    r.prime = bmp::miller_rabin_test(n, static_cast<unsigned>(rounds), gen);
    return r;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> f;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d) continue;
        f.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) f.push_back(n);
    return f;
}

std::uint64_t smallest_primitive_root(std::uint64_t q) {
    if (!is_prime_u64(q)) throw DomainError("primitive root requested for composite " + std::to_string(q));
    if (q == 2) return 1;
    const auto factors = distinct_prime_factors(q - 1);
    for (std::uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (auto p : factors) {
            if (pow_mod(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw ContractError("no primitive root found for " + std::to_string(q));
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<std::uint64_t>(lo, 2);
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }
    constexpr std::uint64_t kSegment = 1 << 20;
    for (std::uint64_t start = lo; start <= hi; start += kSegment) {
        const std::uint64_t end = std::min(hi, start + kSegment - 1);
        std::vector<char> seg(end - start + 1, 1);
        for (auto p : base) {
            if (p * p > end) break;
            std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
            for (std::uint64_t j = first; j <= end; j += p) seg[j - start] = 0;
        }
        for (std::uint64_t i = 0; i < seg.size(); ++i)
            if (seg[i]) out.push_back(start + i);
        if (end == hi) break;
    }
    return out;
}

}  // namespace ekscan
