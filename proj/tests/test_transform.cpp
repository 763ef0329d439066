#include <doctest.h>

#include "ekscan/accuracy.hpp"
#include "ekscan/transform.hpp"
#include "oracles.hpp"

#include <random>

using namespace ekscan;

namespace {

std::vector<Complex> random_seq(std::size_t n, unsigned seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(u(g), u(g));
    return x;
}

long double l2(const std::vector<Complex>& x) {
    long double s = 0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

long double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    long double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("trivial plans") {
    const auto p1 = plan(1, Direction::Forward);
    CHECK(p1.steps().empty());
    CHECK(execute(p1, {Complex(3, 4)})[0] == Complex(3, 4));
    const auto p4 = plan(4, Direction::Forward);
    const auto y = execute(p4, {1, 0, 0, 0});
    for (const auto& v : y) CHECK(std::abs(v - Complex(1)) < 1e-18L);
    CHECK_THROWS_AS(plan(0, Direction::Forward), DomainError);
}

TEST_CASE("power of two uses radix 2 and 4 only") {
    const auto p = plan(1 << 10, Direction::Forward);
    for (const auto& s : p.steps()) CHECK((s.kernel == FactorKernel::Radix2 || s.kernel == FactorKernel::Radix4));
    CHECK_FALSE(p.uses_bluestein());
}

TEST_CASE("large prime factor plans with the chirp kernel") {
    PlanOptions o;
    o.materialize = false;
    const auto p = plan(964477900, Direction::Forward, o);
    CHECK(p.uses_bluestein());
    CHECK(p.steps().back().radix == 9644779);
    CHECK_FALSE(p.materialized());
    PlanOptions tight;
    tight.memory_budget = 1 << 20;
    CHECK_THROWS_AS(plan(1 << 20, Direction::Forward, tight), ResourceError);
    PlanOptions small;
    small.max_length = 100;
    CHECK_THROWS_AS(plan(101, Direction::Forward, small), ResourceError);
}

TEST_CASE("matches the O(N^2) definition for every N <= 64") {
    for (auto arith : {TransformArithmetic::Compensated, TransformArithmetic::Extended}) {
        PlanOptions o;
        o.arithmetic = arith;
        o.direct_limit = 7;  // push 11, 13, ... through the chirp path
        for (std::size_t n = 1; n <= 64; ++n) {
            const auto x = random_seq(n, 7 + n);
            const auto want = oracle::dft(x);
            const auto got = execute(plan(n, Direction::Forward, o), x);
            INFO("N=" << n);
            CHECK(max_diff(got, want) <= 1e3L * std::numeric_limits<long double>::epsilon() * l2(x));
        }
    }
}

TEST_CASE("inverse is normalized") {
    for (std::size_t n : {6, 17, 97, 210, 1009}) {
        const auto x = random_seq(n, n);
        const auto y = execute(plan(n, Direction::Inverse), execute(plan(n, Direction::Forward), x));
        CHECK(max_diff(x, y) <= delta(n) * (2 + delta(n)) * l2(x));
    }
}

TEST_CASE("Parseval") {
    for (std::size_t n : {30, 127, 1000, 4099}) {
        const auto x = random_seq(n, 3 * n);
        const auto y = execute(plan(n, Direction::Forward), x);
        const long double lhs = l2(y) * l2(y), rhs = n * l2(x) * l2(x);
        CHECK(std::abs(lhs - rhs) <= 10 * delta(n) * rhs);
    }
}

TEST_CASE("chirp and mixed radix agree") {
    // 3 and 5 always have their own butterflies, so 7 * 11 is the smallest
    // length where both routes exist
    for (std::size_t n : {77, 15 * 7}) {
        const auto x = random_seq(n, n);
        PlanOptions chirp;
        chirp.direct_limit = 2;
        CHECK(plan(n, Direction::Forward, chirp).uses_bluestein());
        CHECK_FALSE(plan(n, Direction::Forward).uses_bluestein());
        const auto a = execute(plan(n, Direction::Forward), x);
        const auto b = execute(plan(n, Direction::Forward, chirp), x);
        CHECK(max_diff(a, b) <= 10 * delta(n) * l2(x));
    }
}

TEST_CASE("length mismatch") {
    const auto p = plan(8, Direction::Forward);
    std::vector<Complex> x(7);
    TransformScratch s(p);
    CHECK_THROWS_AS(execute(p, std::span<Complex>(x), s), ContractError);
}

TEST_CASE("twiddled half transform") {
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    for (std::uint64_t q : {7, 11, 101}) {
        const std::size_t n = (q - 1) / 2;
        // constant input: geometric sums
        std::vector<Complex> ones(n, Complex(1));
        const auto y = twiddled_half_transform(ones, q);
        for (std::size_t m = 0; m < n; ++m) {
            const Complex w = std::polar(1.0L, two_pi * (2 * m + 1) / (q - 1));
            const Complex closed = (Complex(1) - std::pow(w, static_cast<int>(n))) / (Complex(1) - w);
            CHECK(std::abs(y[m] - closed) < 1e-16L);
        }
        // arbitrary input against the double loop; linearity
        const auto a = random_seq(n, q), b = random_seq(n, q + 1);
        const auto ya = twiddled_half_transform(a, q), yb = twiddled_half_transform(b, q);
        std::vector<Complex> mix(n);
        for (std::size_t k = 0; k < n; ++k) mix[k] = 2.0L * a[k] - Complex(0, 3) * b[k];
        const auto ym = twiddled_half_transform(mix, q);
        for (std::size_t m = 0; m < n; ++m) {
            Complex acc = 0;
            for (std::size_t k = 0; k < n; ++k) acc += a[k] * std::polar(1.0L, two_pi * ((2 * m + 1) * k % (q - 1)) / (q - 1));
            CHECK(std::abs(ya[m] - acc) < 1e-15L);
            CHECK(std::abs(ym[m] - (2.0L * ya[m] - Complex(0, 3) * yb[m])) < 1e-15L);
        }
    }
}

TEST_CASE("packed real pairs") {
    const std::size_t n = 50;
    std::vector<TransformReal> a(n), b(n);
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (std::size_t k = 0; k < n; ++k) a[k] = u(g), b[k] = u(g);
    std::vector<Complex> ca(a.begin(), a.end()), cb(b.begin(), b.end());
    const auto pl = plan(n, Direction::Forward);
    const auto pr = forward_real_pair(pl, a, b);
    CHECK(max_diff(pr.first, oracle::dft(ca)) < 1e-16L);
    CHECK(max_diff(pr.second, oracle::dft(cb)) < 1e-16L);
    const auto tw = twiddled_half_transform_pair(a, b, 2 * n + 1, pl);
    CHECK(max_diff(tw.first, twiddled_half_transform(ca, 2 * n + 1)) < 1e-16L);
    CHECK(max_diff(tw.second, twiddled_half_transform(cb, 2 * n + 1)) < 1e-16L);
}

TEST_CASE("unit roots") {
    CHECK(unit_root(0, 12) == Complex(1));
    CHECK(std::abs(unit_root(3, 12) - Complex(0, 1)) < 1e-19L);
    CHECK(std::abs(unit_root(1, 8) - std::polar(1.0L, std::numbers::pi_v<long double> / 4)) < 1e-19L);
}

}  // TEST_SUITE
