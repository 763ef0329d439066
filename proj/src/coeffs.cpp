#include "ekscan/coeffs.hpp"

#include <mutex>

namespace ekscan {

namespace {

std::mutex bernoulli_mutex;
std::vector<Rational> bernoulli_cache{Rational(1), Rational(-1, 2)};

std::size_t bit_size(const Rational& r) {
    const BigInt n = bmp::numerator(r), d = bmp::denominator(r);
    return (n == 0 ? 0 : bmp::msb(bmp::abs(n))) + bmp::msb(d) + 2;
}

// B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
void extend_to(int k) {
    while (static_cast<int>(bernoulli_cache.size()) <= k) {
        const int m = static_cast<int>(bernoulli_cache.size());
        if (m % 2 == 1) {
            bernoulli_cache.emplace_back(0);
            continue;
        }
        Rational acc = 0;
        BigInt binom = 1;  // C(m+1, j)
        for (int j = 0; j < m; ++j) {
            if (j < 2 || j % 2 == 0) acc += Rational(binom) * bernoulli_cache[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        Rational b = -acc / Rational(m + 1);
        if (bit_size(b) > kBernoulliBitBudget)
            throw ResourceError("bernoulli: B_" + std::to_string(m) + " exceeds the rational size budget");
        bernoulli_cache.push_back(std::move(b));
    }
}

}  // namespace

Rational bernoulli(int k) {
    if (k < 0) throw DomainError("bernoulli: k must be non-negative");
    std::lock_guard lock(bernoulli_mutex);
    extend_to(k);
    return bernoulli_cache[k];
}

}  // namespace ekscan
