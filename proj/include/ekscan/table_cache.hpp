#pragma once

// Process-wide coefficient tables, one per (scalar, bits), optionally backed
// by cache files in a directory.

#include "ekscan/coeffs.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ekscan {

namespace table_detail {
inline std::mutex dir_mutex;
inline std::filesystem::path cache_dir;
}  // namespace table_detail

/// Empty path disables the on-disk cache.
inline void set_coefficient_cache_dir(const std::filesystem::path& dir) {
    std::lock_guard lock(table_detail::dir_mutex);
    table_detail::cache_dir = dir;
}

inline std::filesystem::path coefficient_cache_dir() {
    std::lock_guard lock(table_detail::dir_mutex);
    return table_detail::cache_dir;
}

template <class Real>
std::shared_ptr<const CoefficientTable<Real>> shared_table(int bits) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CoefficientTable<Real>>> tables;
    std::lock_guard lock(mu);
    auto& slot = tables[bits];
    if (slot) return slot;
    const Precision p(bits);
    const auto dir = coefficient_cache_dir();
    if (dir.empty()) {
        slot = std::make_shared<const CoefficientTable<Real>>(CoefficientTable<Real>::build(p));
    } else {
        std::filesystem::create_directories(dir);
        const auto file = dir / ("coefficients-b" + std::to_string(bits) + "-m" +
                                 std::to_string(mantissa_bits<Real>) + ".txt");
        slot = std::make_shared<const CoefficientTable<Real>>(CoefficientTable<Real>::load_or_build(file, p));
    }
    return slot;
}

}  // namespace ekscan
