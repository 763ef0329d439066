#pragma once

// Greedy prime offsets b(1)=0, b(2)=2, ... : each term is the smallest integer
// above the previous one that keeps every prefix admissible (no prime r sees
// all r residues). Plus m(A) and the ranking score v(q).

#include "ekscan/primes.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ekscan {

inline constexpr std::size_t kDefaultOffsetCount = 2089;

struct OffsetSequence {
    std::vector<std::uint64_t> b;  // b[0] = 0
    std::size_t count() const { return b.size(); }
};

OffsetSequence greedy_offsets(std::size_t count);

/// True if for every prime r <= limit the values miss at least one class mod r.
bool admissible(std::span<const std::uint64_t> values, std::uint64_t limit);

/// Sum of 1/a; a = 0 is a domain error.
double m_of(std::span<const std::uint64_t> values);

struct VScore {
    std::uint64_t q = 0;
    double v = 0;
    std::vector<std::uint64_t> contributing;
    PrimalityMethod method = PrimalityMethod::DeterministicMR64;  // strongest method needed
    int rounds = 0;
};

/// v(q) = sum of 1/b(i), 2 <= i <= min(count, seq length), over b(i) with b(i) q + 1 prime.
VScore v_score(std::uint64_t q, const OffsetSequence& seq, std::size_t count = kDefaultOffsetCount);

/// Five classes: 0: v <= 1/4, 1: <= 1/2, 2: <= 3/4, 3: <= 1, 4: > 1.
int v_band(double v);
std::string v_band_label(int band);

}  // namespace ekscan
