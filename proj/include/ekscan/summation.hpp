#pragma once

// Compensated summation: pairwise summation whose leaf blocks are summed with
// Kahan's method. The streaming accumulator reproduces the same tree as the
// recursive version, so results do not depend on how terms are fed in.

#include <cstddef>
#include <span>
#include <vector>

namespace ekscan {

inline constexpr std::size_t kPairwiseBlock = 64;

template <class T>
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(const T& init) : sum_(init) {}

    KahanSum& operator+=(const T& x) {
        const T y = x - comp_;
        const T t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
        return *this;
    }
    T value() const { return sum_ - comp_; }

private:
    T sum_{0};
    T comp_{0};
};

/// Recursive pairwise sum with Kahan-summed blocks of kPairwiseBlock terms.
template <class T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.size() <= kPairwiseBlock) {
        KahanSum<T> k;
        for (const auto& x : xs) k += x;
        return k.value();
    }
    // split on a block boundary so the tree matches PairwiseAccumulator
    std::size_t blocks = (xs.size() + kPairwiseBlock - 1) / kPairwiseBlock;
    std::size_t half = 1;
    while (half * 2 < blocks) half *= 2;
    const std::size_t cut = half * kPairwiseBlock;
    return pairwise_sum(xs.first(cut)) + pairwise_sum(xs.subspan(cut));
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
    return pairwise_sum(std::span<const T>(xs));
}

/// Streaming form of pairwise_sum(): terms are pushed one at a time and no
/// term buffer is kept. Completed blocks are merged like a binary counter.
template <class T>
class PairwiseAccumulator {
public:
    void add(const T& x) {
        block_ += x;
        if (++in_block_ == kPairwiseBlock) flush_block();
    }
    PairwiseAccumulator& operator+=(const T& x) {
        add(x);
        return *this;
    }

    std::size_t count() const { return total_blocks_ * kPairwiseBlock + in_block_; }

    T value() const {
        // fold from the smallest (most recent) subtree upwards; the partial
        // block is the rightmost leaf
        T acc{0};
        bool have = false;
        if (in_block_ > 0) {
            acc = block_.value();
            have = true;
        }
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            acc = have ? it->sum + acc : it->sum;
            have = true;
        }
        return acc;
    }

private:
    struct Node {
        T sum;
        std::size_t size;  // number of blocks
    };

    void flush_block() {
        Node n{block_.value(), 1};
        block_ = KahanSum<T>{};
        in_block_ = 0;
        ++total_blocks_;
        while (!stack_.empty() && stack_.back().size == n.size) {
            n.sum = stack_.back().sum + n.sum;
            n.size *= 2;
            stack_.pop_back();
        }
        stack_.push_back(std::move(n));
    }

    KahanSum<T> block_;
    std::size_t in_block_ = 0;
    std::size_t total_blocks_ = 0;
    std::vector<Node> stack_;
};

}  // namespace ekscan
