#pragma once

// Arbitrary-length DFT: Stockham autosort over the prime factorisation of N,
// hand-written butterflies for 2, 3, 4, 5, a direct kernel for other small
// primes and Bluestein's chirp convolution for large prime factors.
//
// Two arithmetics share the code: plain long double, and a compensated mode
// that keeps long double input/output but runs every butterfly in
// double-double, so the only rounding at storage precision is the final one.
//
// Sign convention: the forward transform uses e^{+2 pi i jk/N}, matching the
// character convention chi_j(g^k) = e^{2 pi i jk/(q-1)}. The inverse carries 1/N.

#include "ekscan/detail/double_double.hpp"
#include "ekscan/error.hpp"
#include "ekscan/scalar.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ekscan {

using Complex = std::complex<TransformReal>;

enum class Direction { Forward, Inverse };

enum class TransformArithmetic { Extended, Compensated };

enum class FactorKernel { Radix2, Radix3, Radix4, Radix5, Direct, Bluestein };

std::string kernel_name(FactorKernel k);

struct FactorStep {
    std::size_t radix;
    FactorKernel kernel;
};

struct PlanOptions {
    /// Above this radix a prime factor goes through the chirp convolution.
    std::size_t direct_limit = 64;
    /// Planned tables plus scratch must fit in this many bytes.
    std::size_t memory_budget = std::size_t{1} << 30;
    std::size_t max_length = std::size_t{1} << 40;
    /// false: only the strategy descriptor, no tables (usable for lengths
    /// beyond the memory budget).
    bool materialize = true;
    TransformArithmetic arithmetic = TransformArithmetic::Compensated;
};

namespace detail {
template <class C>
struct Engine;
}

class TransformPlan;
struct SpectrumPair;

/// Per-thread work buffers for execute(); grows on demand.
class TransformScratch {
public:
    TransformScratch() = default;
    explicit TransformScratch(const TransformPlan& p);

private:
    friend void execute(const TransformPlan&, std::span<Complex>, TransformScratch&);
    friend std::vector<Complex> twiddled_half_transform(std::span<const Complex>, std::uint64_t,
                                                        const TransformPlan*);
    std::vector<Complex> ext_;
    std::vector<detail::ComplexDD> dd_;
};

class TransformPlan {
public:
    std::size_t length() const { return n_; }
    Direction direction() const { return dir_; }
    const std::vector<FactorStep>& steps() const { return steps_; }
    TransformArithmetic arithmetic() const { return arith_; }
    bool materialized() const { return ext_ != nullptr || dd_ != nullptr; }
    bool uses_bluestein() const;
    /// Bytes of tables plus one scratch buffer.
    std::size_t memory_estimate() const { return bytes_; }
    /// Work entries needed by execute().
    std::size_t scratch_size() const { return scratch_; }
    std::string describe() const;

private:
    friend TransformPlan plan(std::size_t, Direction, const PlanOptions&);
    friend void execute(const TransformPlan&, std::span<Complex>, TransformScratch&);
    friend std::vector<Complex> twiddled_half_transform(std::span<const Complex>, std::uint64_t,
                                                        const TransformPlan*);
    friend SpectrumPair forward_real_pair(const TransformPlan&, std::span<const TransformReal>,
                                          std::span<const TransformReal>);
    friend SpectrumPair twiddled_half_transform_pair(std::span<const TransformReal>,
                                                     std::span<const TransformReal>, std::uint64_t,
                                                     const TransformPlan&);
    std::size_t n_ = 1;
    Direction dir_ = Direction::Forward;
    TransformArithmetic arith_ = TransformArithmetic::Compensated;
    std::vector<FactorStep> steps_;
    std::size_t bytes_ = 0;
    std::size_t scratch_ = 0;
    std::shared_ptr<const detail::Engine<Complex>> ext_;
    std::shared_ptr<const detail::Engine<detail::ComplexDD>> dd_;
};

/// Plan a length-n transform. Throws ResourceError if the tables would exceed
/// the memory budget (only when materializing).
TransformPlan plan(std::size_t n, Direction dir, const PlanOptions& opts = {});

/// In-place transform of `data`. Plans are immutable; concurrent calls need
/// distinct scratch objects.
void execute(const TransformPlan& p, std::span<Complex> data, TransformScratch& scratch);

/// Allocating convenience form.
std::vector<Complex> execute(const TransformPlan& p, std::vector<Complex> data);

/// e^{2 pi i k/n}, reduced to the first octant before calling sin/cos.
Complex unit_root(std::uint64_t k, std::uint64_t n);

/// Y[m] = sum_{k<N} x[k] e^{2 pi i (2m+1) k/(q-1)}, N = (q-1)/2.
std::vector<Complex> twiddled_half_transform(std::span<const Complex> x, std::uint64_t q,
                                             const TransformPlan* forward_plan = nullptr);

struct SpectrumPair {
    std::vector<Complex> first, second;
};

/// Forward transforms of two real sequences through one complex transform.
SpectrumPair forward_real_pair(const TransformPlan& forward_plan, std::span<const TransformReal> a,
                               std::span<const TransformReal> b);

/// twiddled_half_transform of two real sequences through one transform.
SpectrumPair twiddled_half_transform_pair(std::span<const TransformReal> a, std::span<const TransformReal> b,
                                          std::uint64_t q, const TransformPlan& forward_plan);

/// O(N^2) reference DFT with the same sign convention.
std::vector<Complex> naive_dft(std::span<const Complex> x, Direction dir);

}  // namespace ekscan
