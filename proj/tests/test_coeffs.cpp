#include <doctest.h>

#include "ekscan/coeffs.hpp"
#include "support.hpp"

using namespace ekscan;
using testing::OReal;

namespace {

const CoefficientTable<Mp100>& table128() {
    static const auto t = CoefficientTable<Mp100>::build(Precision(128));
    return t;
}

double d(const OReal& x) { return x.convert_to<double>(); }

}  // namespace

TEST_SUITE("coeffs") {

TEST_CASE("precision limits") {
    CHECK_THROWS_AS(Precision(15), DomainError);
    CHECK_THROWS_AS(Precision(257), DomainError);
    CHECK(Precision(256).bits() == 256);
    CHECK(Precision(64).table_length() >= 64 + 16);
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic<long double>(1) == 1.0L);
    CHECK(harmonic<long double>(2) == 1.5L);
    CHECK(abs(harmonic<Mp100>(4) - Mp100(25) / 12) < Mp100("1e-98"));
    CHECK(harmonic<long double>(0) == 0.0L);
    CHECK_THROWS_AS(harmonic<long double>(-1), DomainError);
}

TEST_CASE("bernoulli numbers are exact") {
    CHECK(bernoulli(0) == Rational(1));
    CHECK(bernoulli(1) == Rational(-1, 2));
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(12) == Rational(-691, 2730));
    for (int k = 3; k < 40; k += 2) CHECK(bernoulli(k) == 0);
    // against Boost's independent table
    for (int j = 1; j <= 30; ++j) {
        const OReal b = boost::math::bernoulli_b2n<OReal>(j);
        CHECK(abs(OReal(bernoulli(2 * j)) - b) <= abs(b) * OReal(1e-100));
    }
}

TEST_CASE("zeta at even arguments") {
    const OReal pi = oracle::pi();
    CHECK(abs(OReal(zeta_even<Mp100>(2)) - pi * pi / 6) < OReal(1e-90));
    CHECK(abs(OReal(zeta_even<Mp100>(4)) - pow(pi, 4) / 90) < OReal(1e-90));
    for (int k = 6; k <= 40; k += 2)
        CHECK(abs(OReal(zeta_even<Mp100>(k)) - oracle::zeta(OReal(k))) < OReal(1e-90));
    CHECK(abs(zeta_even<Mp100>(200) - 1) < pow2<Mp100>(-128));
    CHECK_THROWS_AS(zeta_even<long double>(3), DomainError);
}

TEST_CASE("zeta at odd arguments via Euler-Maclaurin") {
    const Mp100 a = zeta_em<Mp100>(3, 256, 32);
    const Mp100 b = zeta_em<Mp100>(3, 256, 64);
    CHECK(abs(a - b) < pow2<Mp100>(-256));
    CHECK(abs(OReal(a) - oracle::zeta(OReal(3))) < OReal(1e-75));
    CHECK(std::abs(zeta<long double>(3, 64) - 1.2020569031595942854L) < 1e-18L);
    CHECK(abs(zeta<Mp100>(200, 128) - 1) < pow2<Mp100>(-128));
    for (int k : {5, 7, 51, 101})
        CHECK(abs(OReal(zeta<Mp100>(k, 300)) - oracle::zeta(OReal(k))) < OReal(1e-85));
}

TEST_CASE("zeta minus one keeps relative precision") {
    for (int k : {40, 200, 500}) {
        // direct sum; 1 + tiny would cancel in any zeta(k) oracle
        OReal want = 0;
        for (int n = 2000; n >= 2; --n) want += pow(OReal(n), -k);
        const OReal got(zeta_minus_one<Mp100>(k, 256));
        CHECK(abs(got - want) <= want * OReal(1e-78));
    }
}

TEST_CASE("zeta prime") {
    CHECK(std::abs(zeta_prime<long double>(2, 64) - (-0.93754825431584375370L)) < 1e-18L);
    const Mp100 a = zeta_prime_em<Mp100>(2, 256, 40);
    const Mp100 b = zeta_prime_em<Mp100>(2, 256, 64);
    CHECK(abs(a - b) < pow2<Mp100>(-250));
    // 200 digits is beyond Mp100, but 420 > 200 log2(10) already pushes |zeta'| below 1e-120
    CHECK(abs(zeta_prime<Mp100>(420, 256)) < Mp100("1e-120"));
    const OReal l2 = log(OReal(2)), l3 = log(OReal(3));
    for (int k = 4; k <= 120; ++k) {
        const OReal v(zeta_prime<Mp100>(k, 256));
        CHECK(v > -(l2 + 2 * l3 / 3) / pow(OReal(2), k));
        CHECK(v < -l2 / pow(OReal(2), k));
    }
}

TEST_CASE("table entries") {
    const auto& t = table128();
    CHECK(t.max_index() >= 128 + 16);
    CHECK(abs(OReal(t.L(2)) - OReal("0.70738581253238268277")) < OReal(1e-19));
    CHECK(d(OReal(t.zeta(2))) == doctest::Approx(1.6449340668482264));
    for (int k = 2; k <= t.max_index(); ++k) {
        CHECK(t.L(k) > 0);
        CHECK(t.zeta_minus_one(k) > 0);
    }
    // L(k) -> H_{k-1} once zeta(k) - 1 and zeta'(k) are negligible
    CHECK(abs(t.L(t.max_index()) - t.harmonic(t.max_index() - 1)) < pow2<Mp100>(-128));
    CHECK_THROWS_AS(t.L(1), ResourceError);
    CHECK_THROWS_AS(t.L(t.max_index() + 1), ResourceError);
}

TEST_CASE("fast constants") {
    const auto& t = table128();
    const OReal g = oracle::euler_gamma(), g1 = oracle::gamma1();
    CHECK(abs(OReal(gamma_fast(t, 64)) - g) < testing::pow2(-62));
    CHECK(abs(OReal(gamma1_fast(t, 64)) - g1) < testing::pow2(-63));
    CHECK(abs(OReal(gamma1_fast(t, 64)) - OReal("-0.0728158454836767248605863758749547")) < OReal(1e-18));
    CHECK(abs(gamma_fast(t, 16) - gamma_fast(t, 128)) < pow2<Mp100>(-14));
    CHECK(abs(gamma1_fast(t, 16) - gamma1_fast(t, 128)) < pow2<Mp100>(-15));
    CHECK(gamma_fast(t, 64) > Mp100(0.5));
    CHECK(gamma_fast(t, 64) < Mp100(0.6));
    CHECK(abs(OReal(t.gamma()) - g) < OReal(1e-38));
    CHECK(abs(OReal(t.gamma1()) - g1) < OReal(1e-38));
    CHECK_THROWS_AS(gamma_fast(t, 8), DomainError);
    CHECK_THROWS_AS(gamma_fast(t, 512), ResourceError);
}

TEST_CASE("zeta''(0)") {
    const auto& t = table128();
    const OReal want = oracle::zeta_second_zero();
    CHECK(abs(OReal(t.zeta_second_zero()) - want) < OReal(1e-37));
    CHECK(abs(want - OReal("-2.0063564559085848512101000267")) < OReal(1e-25));
    CHECK(t.zeta_second_zero() < 0);
}

TEST_CASE("narrowed tables agree") {
    const auto& t = table128();
    const auto ld = t.cast<long double>();
    for (int k = 2; k <= 60; ++k)
        CHECK(std::abs(ld.L(k) - narrow<long double>(t.L(k))) <= 8 * std::numeric_limits<long double>::epsilon() * ld.L(k));
}

TEST_CASE("cache round trip") {
    testing::TempDir dir("coeffs");
    const auto file = dir.path / "table.txt";
    const auto t = CoefficientTable<Mp50>::build(Precision(96));
    t.save(file);
    const auto back = CoefficientTable<Mp50>::load(file, Precision(96));
    REQUIRE(back.has_value());
    for (int k = 2; k <= t.max_index(); ++k) {
        CHECK(back->L(k) == t.L(k));
        CHECK(back->zeta_minus_one(k) == t.zeta_minus_one(k));
    }
    CHECK(back->gamma1() == t.gamma1());
    // a different precision or scalar width is a miss
    CHECK_FALSE(CoefficientTable<Mp50>::load(file, Precision(64)).has_value());
    CHECK_FALSE(CoefficientTable<long double>::load(file, Precision(96)).has_value());
    CHECK_FALSE(CoefficientTable<Mp50>::load(dir.path / "absent.txt", Precision(96)).has_value());
    // load_or_build writes the file
    const auto other = dir.path / "other.txt";
    CoefficientTable<long double>::load_or_build(other, Precision(48));
    CHECK(std::filesystem::exists(other));
}

}  // TEST_SUITE
