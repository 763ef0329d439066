#pragma once

// Primality, primitive roots and prime enumeration.

#include "ekscan/coeffs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ekscan {

enum class PrimalityMethod {
    TrialDivision,
    DeterministicMR64,    // 7 fixed bases, exact below 2^64
    DeterministicMR13,    // first 13 prime bases, exact below 3.3e24
    ProbableMR,           // random bases
};

std::string method_name(PrimalityMethod m);

struct PrimalityResult {
    bool prime = false;
    PrimalityMethod method = PrimalityMethod::TrialDivision;
    int rounds = 0;
};

/// Exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// Deterministic below 3.317e24, otherwise `rounds` random-base rounds.
PrimalityResult is_prime(const BigInt& n, int rounds = 64);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Distinct prime divisors by trial division.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

/// Smallest primitive root of the prime q.
std::uint64_t smallest_primitive_root(std::uint64_t q);

/// Primes p with lo <= p <= hi (segmented sieve).
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

}  // namespace ekscan
