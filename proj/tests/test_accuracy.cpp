#include <doctest.h>

#include "ekscan/accuracy.hpp"
#include "ekscan/lfunc.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ekscan;

TEST_SUITE("accuracy") {

TEST_CASE("delta") {
    const long double big = delta((50040955631.0L - 1) / 2, 0x1p-64L);
    CHECK(big < 1.92e-19L);
    CHECK(big > 1.9e-19L);
    CHECK(delta(2, 1e-10L) == doctest::Approx(0.6e-10));
    long double prev = 0;
    for (long double n = 2; n < 1e12L; n *= 3.7L) {
        CHECK(delta(n) > prev);
        prev = delta(n);
    }
    CHECK_THROWS_AS(delta(1), DomainError);
    CHECK_THROWS_AS(delta(10, 0), DomainError);
}

TEST_CASE("closed forms at the large modulus") {
    const auto c = norm_closed_forms(50040955631ULL);
    CHECK(std::abs(c.x_l2 - 91324.47246L) < 1e-5L);
    CHECK(std::abs(c.y_inf - 23.49137L) < 1e-5L);
    CHECK(std::abs(c.z_inf - 24.63610L) < 1e-5L);
    CHECK(std::abs(c.w_inf - 606.93779L) < 1e-3L);
}

TEST_CASE("closed forms match built sequences") {
    for (std::uint64_t q : {5, 101, 1009, 9973}) {
        const auto ctx = prime_context(q);
        const auto b = build_sequences(ctx, 64);
        const auto c = norm_closed_forms(q);
        CHECK(std::abs(norms(b.xk).l2 - c.x_l2) <= 1e-10L * c.x_l2);
        CHECK(std::abs(norms(b.ySym).linf - c.y_inf) <= 1e-10L * c.y_inf);
        CHECK(std::abs(norms(b.zAnti).linf - c.z_inf) <= 1e-10L * c.z_inf);
        CHECK(std::abs(norms(b.sSym).linf - c.w_inf) <= 1e-10L * c.w_inf);
        // independent check of the z norm
        const oracle::OReal x = oracle::OReal(1) / q;
        const long double z = (oracle::log_gamma(x) - oracle::log_gamma(1 - x)).convert_to<long double>();
        CHECK(std::abs(c.z_inf - z) <= 1e-15L * z);
    }
}

TEST_CASE("round trip audits") {
    const std::uint64_t q = 2003;
    const auto b = build_sequences(prime_context(q), 64);
    const auto rep = audit_sequences(b);
    CHECK(rep.N == 1001);
    CHECK(rep.passed());
    CHECK_NOTHROW(rep.enforce());
    for (const auto& [name, rt] : rep.round_trip) {
        INFO(name);
        CHECK(rt.within());
        CHECK(rt.e2 <= rt.bound2);
        CHECK(rt.einf <= rt.bound_inf);
    }
    CHECK(rep.round_trip.size() == 4);
    // zero in, zero error
    std::vector<TransformReal> zeros(64, 0);
    const auto z = roundtrip_audit(zeros, plan(64, Direction::Forward));
    CHECK(z.e2 == 0);
    CHECK(z.einf == 0);
}

TEST_CASE("a what-if epsilon far below the arithmetic fails loudly") {
    const auto b = build_sequences(prime_context(1009), 64);
    const auto rep = audit_sequences(b, nullptr, 0x1p-113L);
    CHECK_FALSE(rep.passed());
    CHECK_THROWS_AS(rep.enforce(), AuditFailure);
}

}  // TEST_SUITE
