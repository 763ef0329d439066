#pragma once

// Glue between the library's scalar dispatch and the oracle type.

#include "ekscan/specfun.hpp"
#include "ekscan/table_cache.hpp"
#include "oracles.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace testing {

using oracle::OReal;

template <class Real>
OReal widen(const Real& x) {
    if constexpr (std::is_floating_point_v<Real>) {
        return OReal(static_cast<long double>(x));
    } else {
        return OReal(x);
    }
}

struct Eval {
    OReal value, bound;
    int terms = 0;
};

// Runs fn(point, n, table) on the scalar picked for n, x = a/q exactly.
template <class Fn>
Eval eval_ratio(Fn fn, std::int64_t a, std::int64_t q, int n) {
    return ekscan::dispatch_scalar(n, [&](auto zero) {
        using R = decltype(zero);
        const auto table = ekscan::shared_table<R>(n);
        const auto p = ekscan::DomainPoint<R>::from_ratio(a, q);
        const auto r = fn(p, n, *table);
        return Eval{widen(r.value), widen(r.error_bound), r.terms_used};
    });
}

#define EKSCAN_EVAL_FN(name)                                    \
    [](const auto& p, int n, const auto& t) { return ekscan::name(p, n, t); }

inline OReal pow2(int e) { return ldexp(OReal(1), e); }

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20211);
    return g;
}

// scratch directory removed on scope exit
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("ekscan-" + tag + "-" + std::to_string(std::random_device{}()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

}  // namespace testing
