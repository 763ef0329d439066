#include "ekscan/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace ekscan {

namespace {

using LD = TransformReal;
using detail::ComplexDD;
using detail::DD;

// ---- arithmetic adaptors ---------------------------------------------------

template <class C>
struct Arith;

template <>
struct Arith<Complex> {
    using Real = LD;
    static Complex root(std::uint64_t k, std::uint64_t n) { return unit_root(k, n); }
    static Real real(LD v) { return v; }
    static Real reciprocal(std::size_t n) { return LD(1) / static_cast<LD>(n); }
    static Complex times_i(const Complex& z) { return {-z.imag(), z.real()}; }
    static Complex conj(const Complex& z) { return std::conj(z); }
    static Complex zero() { return Complex(0); }
};

template <>
struct Arith<ComplexDD> {
    using Real = DD;
    static ComplexDD root(std::uint64_t k, std::uint64_t n) {
        const Mp50 th = 2 * pi_v<Mp50>() * Mp50(k % n) / Mp50(n);
        return {split(cos(th)), split(sin(th))};
    }
    static DD split(const Mp50& v) {
        const double hi = v.convert_to<double>();
        return {hi, Mp50(v - hi).convert_to<double>()};
    }
    static Real real(LD v) { return detail::dd_from(v); }
    static Real reciprocal(std::size_t n) { return detail::dd_reciprocal(static_cast<double>(n)); }
    static ComplexDD times_i(const ComplexDD& z) { return detail::times_i(z); }
    static ComplexDD conj(const ComplexDD& z) { return detail::conj(z); }
    static ComplexDD zero() { return {}; }
};

/// e^{2 pi i k/order} for arbitrary k. Double-double roots are a product
/// of three entries from short tables computed in multiprecision.
template <class C>
class RootSource {
public:
    explicit RootSource(std::uint64_t order) : order_(order) {
        if constexpr (std::is_same_v<C, ComplexDD>) {
            while (block_ * block_ * block_ < order) ++block_;
            const std::uint64_t b2 = block_ * block_;
            const std::uint64_t top = (order + b2 - 1) / b2;
            for (std::uint64_t i = 0; i < block_; ++i) {
                t0_.push_back(Arith<C>::root(i, order));
                t1_.push_back(Arith<C>::root(i * block_, order));
            }
            for (std::uint64_t i = 0; i < top; ++i) t2_.push_back(Arith<C>::root(i * b2, order));
        }
    }
    C operator()(std::uint64_t k) const {
        k %= order_;
        if constexpr (std::is_same_v<C, ComplexDD>) {
            return t2_[k / (block_ * block_)] * (t1_[(k / block_) % block_] * t0_[k % block_]);
        } else {
            return unit_root(k, order_);
        }
    }

private:
    std::uint64_t order_;
    std::uint64_t block_ = 1;
    std::vector<C> t0_, t1_, t2_;
};

// ---- planning helpers --------------------------------------------------------

std::vector<std::size_t> prime_factors(std::size_t n) {
    std::vector<std::size_t> f;
    for (std::size_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        while (n % d == 0) {
            f.push_back(d);
            n /= d;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

std::size_t next_pow2(std::size_t v) {
    std::size_t m = 1;
    while (m < v) m <<= 1;
    return m;
}

std::vector<FactorStep> factor_steps(std::size_t n, std::size_t direct_limit) {
    auto primes = prime_factors(n);
    std::vector<FactorStep> steps;
    const auto twos = static_cast<std::size_t>(std::count(primes.begin(), primes.end(), std::size_t{2}));
    for (std::size_t i = 0; i < twos / 2; ++i) steps.push_back({4, FactorKernel::Radix4});
    if (twos % 2) steps.push_back({2, FactorKernel::Radix2});
    // large factors last: the final Stockham stage has unit twiddles
    for (auto p : primes) {
        if (p == 2) continue;
        FactorKernel k = p == 3 ? FactorKernel::Radix3
                         : p == 5 ? FactorKernel::Radix5
                         : p <= direct_limit ? FactorKernel::Direct
                                             : FactorKernel::Bluestein;
        steps.push_back({p, k});
    }
    return steps;
}

constexpr std::size_t kEntry = sizeof(Complex);
static_assert(sizeof(ComplexDD) == kEntry || sizeof(ComplexDD) <= kEntry);

}  // namespace

namespace detail {

template <class C>
struct Engine {
    using A = Arith<C>;
    using Real = typename A::Real;

    struct Bluestein {
        std::size_t p = 0, m = 0;
        std::vector<C> chirp;   // e^{pi i k^2/p}
        std::vector<C> kernel;  // F(conj chirp wrapped) / m
        std::shared_ptr<const Engine> inner;
    };

    std::size_t n = 1;
    std::vector<FactorStep> steps;
    std::vector<C> roots;  // e^{2 pi i k/n}
    std::vector<Bluestein> blue;
    std::size_t scratch = 0;
    Real half, sqrt3_half, c1, s1, c2, s2;

    Engine(std::size_t len, std::vector<FactorStep> st, std::size_t direct_limit) : n(len), steps(std::move(st)) {
        RootSource<C> src(n);
        roots.resize(n);
        for (std::size_t k = 0; k < n; ++k) roots[k] = src(k);
        half = A::real(0.5L);
        const C r3 = A::root(1, 3), r5a = A::root(1, 5), r5b = A::root(2, 5);
        sqrt3_half = imag_of(r3);
        c1 = real_of(r5a);
        s1 = imag_of(r5a);
        c2 = real_of(r5b);
        s2 = imag_of(r5b);
        std::size_t extra = 0;
        for (const auto& f : steps) {
            if (f.kernel != FactorKernel::Bluestein) continue;
            Bluestein b;
            b.p = f.radix;
            b.m = next_pow2(2 * f.radix - 1);
            RootSource<C> chirp_src(2 * static_cast<std::uint64_t>(b.p));
            b.chirp.resize(b.p);
            for (std::size_t k = 0; k < b.p; ++k)
                b.chirp[k] = chirp_src(static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * k) %
                                                                  (2 * static_cast<std::uint64_t>(b.p))));
            b.inner = shared_inner(b.m, direct_limit);
            std::vector<C> d(b.m, A::zero());
            d[0] = A::conj(b.chirp[0]);
            for (std::size_t k = 1; k < b.p; ++k) d[k] = d[b.m - k] = A::conj(b.chirp[k]);
            std::vector<C> work(b.inner->scratch);
            b.inner->run(d.data(), work.data());
            const Real inv_m = A::reciprocal(b.m);
            for (auto& v : d) v = v * inv_m;
            b.kernel = std::move(d);
            extra = std::max(extra, b.m + b.inner->scratch);
            blue.push_back(std::move(b));
        }
        scratch = n + extra;
    }

    /// Power-of-two engines are shared between plans.
    static std::shared_ptr<const Engine> shared_inner(std::size_t m, std::size_t direct_limit) {
        static std::mutex mu;
        static std::map<std::size_t, std::shared_ptr<const Engine>> cache;
        std::lock_guard lock(mu);
        auto& slot = cache[m];
        if (!slot) slot = std::make_shared<const Engine>(m, factor_steps(m, direct_limit), direct_limit);
        return slot;
    }

    static Real real_of(const C& z) {
        if constexpr (std::is_same_v<C, Complex>) return z.real(); else return z.re;
    }
    static Real imag_of(const C& z) {
        if constexpr (std::is_same_v<C, Complex>) return z.imag(); else return z.im;
    }

    // Stockham stage: for q < m, r < s gather a_t = x[r + s(q + m t)] and
    // write y[r + s(P q + j)] = DFT_P(a)_j * w_{n_cur}^{q j}.
    struct Stage {
        const C* x;
        C* y;
        std::size_t m, s, tw;
    };

    C twiddle(std::size_t e) const { return roots[e]; }

    void radix2(const Stage& st) const {
        const std::size_t m = st.m, s = st.s;
        for (std::size_t q = 0; q < m; ++q) {
            const C w1 = roots[q * st.tw];
            for (std::size_t r = 0; r < s; ++r) {
                const C a0 = st.x[r + s * q], a1 = st.x[r + s * (q + m)];
                st.y[r + s * (2 * q)] = a0 + a1;
                st.y[r + s * (2 * q + 1)] = q ? (a0 - a1) * w1 : a0 - a1;
            }
        }
    }

    void radix4(const Stage& st) const {
        const std::size_t m = st.m, s = st.s;
        for (std::size_t q = 0; q < m; ++q) {
            const C w1 = roots[q * st.tw], w2 = roots[2 * q * st.tw], w3 = roots[3 * q * st.tw];
            for (std::size_t r = 0; r < s; ++r) {
                const C a0 = st.x[r + s * q], a1 = st.x[r + s * (q + m)];
                const C a2 = st.x[r + s * (q + 2 * m)], a3 = st.x[r + s * (q + 3 * m)];
                const C t0 = a0 + a2, t1 = a0 - a2, t2 = a1 + a3, t3 = A::times_i(a1 - a3);
                C* out = st.y + r + s * 4 * q;
                out[0] = t0 + t2;
                if (q) {
                    out[s] = (t1 + t3) * w1;
                    out[2 * s] = (t0 - t2) * w2;
                    out[3 * s] = (t1 - t3) * w3;
                } else {
                    out[s] = t1 + t3;
                    out[2 * s] = t0 - t2;
                    out[3 * s] = t1 - t3;
                }
            }
        }
    }

    void radix3(const Stage& st) const {
        const std::size_t m = st.m, s = st.s;
        for (std::size_t q = 0; q < m; ++q) {
            const C w1 = roots[q * st.tw], w2 = roots[2 * q * st.tw];
            for (std::size_t r = 0; r < s; ++r) {
                const C a0 = st.x[r + s * q], a1 = st.x[r + s * (q + m)], a2 = st.x[r + s * (q + 2 * m)];
                const C t = a1 + a2;
                const C u = a0 - t * half;
                const C v = A::times_i(a1 - a2) * sqrt3_half;
                C* out = st.y + r + s * 3 * q;
                out[0] = a0 + t;
                out[s] = q ? (u + v) * w1 : u + v;
                out[2 * s] = q ? (u - v) * w2 : u - v;
            }
        }
    }

    void radix5(const Stage& st) const {
        const std::size_t m = st.m, s = st.s;
        for (std::size_t q = 0; q < m; ++q) {
            C w[5];
            for (std::size_t j = 1; j < 5; ++j) w[j] = roots[j * q * st.tw];
            for (std::size_t r = 0; r < s; ++r) {
                const C a0 = st.x[r + s * q], a1 = st.x[r + s * (q + m)], a2 = st.x[r + s * (q + 2 * m)];
                const C a3 = st.x[r + s * (q + 3 * m)], a4 = st.x[r + s * (q + 4 * m)];
                const C t1 = a1 + a4, t2 = a2 + a3, t3 = a1 - a4, t4 = a2 - a3;
                const C e1 = a0 + t1 * c1 + t2 * c2, e2 = a0 + t1 * c2 + t2 * c1;
                const C o1 = A::times_i(t3 * s1 + t4 * s2), o2 = A::times_i(t3 * s2 - t4 * s1);
                C* out = st.y + r + s * 5 * q;
                out[0] = a0 + t1 + t2;
                C b[5] = {out[0], e1 + o1, e2 + o2, e2 - o2, e1 - o1};
                for (std::size_t j = 1; j < 5; ++j) out[j * s] = q ? b[j] * w[j] : b[j];
            }
        }
    }

    void direct(const Stage& st, std::size_t p) const {
        const std::size_t m = st.m, s = st.s, step = n / p;
        std::vector<C> a(p);
        for (std::size_t q = 0; q < m; ++q) {
            for (std::size_t r = 0; r < s; ++r) {
                for (std::size_t t = 0; t < p; ++t) a[t] = st.x[r + s * (q + m * t)];
                for (std::size_t j = 0; j < p; ++j) {
                    C acc = a[0];
                    std::size_t jt = 0;
                    for (std::size_t t = 1; t < p; ++t) {
                        jt += j;
                        if (jt >= p) jt -= p;
                        acc = acc + a[t] * roots[jt * step];
                    }
                    st.y[r + s * (p * q + j)] = q ? acc * roots[j * q * st.tw] : acc;
                }
            }
        }
    }

    void bluestein(const Stage& st, const Bluestein& b, C* work) const {
        const std::size_t m = st.m, s = st.s, p = b.p, mm = b.m;
        C* u = work;
        C* inner_work = work + mm;
        for (std::size_t q = 0; q < m; ++q) {
            for (std::size_t r = 0; r < s; ++r) {
                for (std::size_t t = 0; t < p; ++t) u[t] = st.x[r + s * (q + m * t)] * b.chirp[t];
                std::fill(u + p, u + mm, A::zero());
                b.inner->run(u, inner_work);
                for (std::size_t k = 0; k < mm; ++k) u[k] = A::conj(u[k] * b.kernel[k]);
                b.inner->run(u, inner_work);
                for (std::size_t j = 0; j < p; ++j) {
                    const C v = A::conj(u[j]) * b.chirp[j];
                    st.y[r + s * (p * q + j)] = q ? v * roots[j * q * st.tw] : v;
                }
            }
        }
    }

    /// Forward transform in place; `work` holds scratch entries.
    void run(C* data, C* work) const {
        if (n == 1) return;
        C* x = data;
        C* y = work;
        C* extra = work + n;
        std::size_t n_cur = n, s = 1, bi = 0;
        for (const auto& f : steps) {
            const std::size_t m = n_cur / f.radix;
            const Stage st{x, y, m, s, n / n_cur};
            switch (f.kernel) {
                case FactorKernel::Radix2: radix2(st); break;
                case FactorKernel::Radix3: radix3(st); break;
                case FactorKernel::Radix4: radix4(st); break;
                case FactorKernel::Radix5: radix5(st); break;
                case FactorKernel::Direct: direct(st, f.radix); break;
                case FactorKernel::Bluestein: bluestein(st, blue[bi++], extra); break;
            }
            std::swap(x, y);
            n_cur = m;
            s *= f.radix;
        }
        if (x != data) std::copy(x, x + n, data);
    }
};

}  // namespace detail

std::string kernel_name(FactorKernel k) {
    switch (k) {
        case FactorKernel::Radix2: return "radix2";
        case FactorKernel::Radix3: return "radix3";
        case FactorKernel::Radix4: return "radix4";
        case FactorKernel::Radix5: return "radix5";
        case FactorKernel::Direct: return "direct";
        case FactorKernel::Bluestein: return "bluestein";
    }
    return "?";
}

Complex unit_root(std::uint64_t k, std::uint64_t n) {
    k %= n;
    // 4k = quad*n + rem, angle = (pi/2)(quad + rem/n)
    const unsigned __int128 k4 = static_cast<unsigned __int128>(k) * 4;
    const auto quad = static_cast<unsigned>(k4 / n);
    const auto rem = static_cast<std::uint64_t>(k4 % n);
    const LD half_pi = std::numbers::pi_v<LD> / 2;
    LD c, s;
    if (2 * static_cast<unsigned __int128>(rem) <= n) {
        const LD th = half_pi * (static_cast<LD>(rem) / static_cast<LD>(n));
        c = std::cos(th);
        s = std::sin(th);
    } else {
        const LD th = half_pi * (static_cast<LD>(n - rem) / static_cast<LD>(n));
        c = std::sin(th);
        s = std::cos(th);
    }
    switch (quad & 3) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

bool TransformPlan::uses_bluestein() const {
    return std::any_of(steps_.begin(), steps_.end(),
                       [](const FactorStep& f) { return f.kernel == FactorKernel::Bluestein; });
}

std::string TransformPlan::describe() const {
    std::ostringstream os;
    os << "N=" << n_ << " (" << (dir_ == Direction::Forward ? "forward" : "inverse") << ", "
       << (arith_ == TransformArithmetic::Compensated ? "double-double" : "long double") << "):";
    if (steps_.empty()) os << " identity";
    for (const auto& f : steps_) os << " " << f.radix << ":" << kernel_name(f.kernel);
    os << "; memory " << bytes_ << " bytes";
    return os.str();
}

TransformPlan plan(std::size_t n, Direction dir, const PlanOptions& opts) {
    if (n < 1) throw DomainError("transform length must be at least 1");
    if (n > opts.max_length)
        throw ResourceError("transform length " + std::to_string(n) + " exceeds configured maximum");
    TransformPlan p;
    p.n_ = n;
    p.dir_ = dir;
    p.arith_ = opts.arithmetic;
    p.steps_ = n > 1 ? factor_steps(n, opts.direct_limit) : std::vector<FactorStep>{};

    // roots + ping-pong buffer, and per Bluestein factor the chirp, kernel,
    // inner roots and the padded work buffers
    std::size_t entries = 2 * n, extra_scratch = 0;
    for (const auto& f : p.steps_) {
        if (f.kernel != FactorKernel::Bluestein) continue;
        const std::size_t mm = next_pow2(2 * f.radix - 1);
        entries += f.radix + 4 * mm;
        extra_scratch = std::max(extra_scratch, 2 * mm);
    }
    p.bytes_ = entries * kEntry;
    p.scratch_ = n + extra_scratch;
    if (!opts.materialize) return p;
    if (p.bytes_ > opts.memory_budget)
        throw ResourceError("transform of length " + std::to_string(n) + " needs " + std::to_string(p.bytes_) +
                            " bytes, budget is " + std::to_string(opts.memory_budget));
    if (opts.arithmetic == TransformArithmetic::Compensated)
        p.dd_ = std::make_shared<const detail::Engine<ComplexDD>>(n, p.steps_, opts.direct_limit);
    else
        p.ext_ = std::make_shared<const detail::Engine<Complex>>(n, p.steps_, opts.direct_limit);
    return p;
}

TransformScratch::TransformScratch(const TransformPlan& p) {
    if (p.arithmetic() == TransformArithmetic::Compensated)
        dd_.resize(p.scratch_size() + p.length());
    else
        ext_.resize(p.scratch_size());
}

void execute(const TransformPlan& p, std::span<Complex> data, TransformScratch& scratch) {
    const std::size_t n = p.n_;
    if (data.size() != n)
        throw ContractError("transform length mismatch: plan " + std::to_string(n) + ", data " +
                            std::to_string(data.size()));
    if (!p.materialized()) throw ContractError("transform plan was not materialized");
    if (n == 1) return;
    const bool inverse = p.dir_ == Direction::Inverse;
    // the inverse is conj o forward o conj, then 1/N
    if (p.dd_) {
        auto& buf = scratch.dd_;
        if (buf.size() < p.scratch_ + n) buf.resize(p.scratch_ + n);
        ComplexDD* v = buf.data();
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = {detail::dd_from(data[k].real()), detail::dd_from(data[k].imag())};
            if (inverse) v[k] = detail::conj(v[k]);
        }
        p.dd_->run(v, v + n);
        const DD inv_n = detail::dd_reciprocal(static_cast<double>(n));
        for (std::size_t k = 0; k < n; ++k) {
            ComplexDD z = v[k];
            if (inverse) z = detail::conj(z) * inv_n;
            data[k] = {detail::dd_to_ld(z.re), detail::dd_to_ld(z.im)};
        }
        return;
    }
    auto& buf = scratch.ext_;
    if (buf.size() < p.scratch_) buf.resize(p.scratch_);
    if (inverse)
        for (auto& v : data) v = std::conj(v);
    p.ext_->run(data.data(), buf.data());
    if (inverse) {
        const LD inv_n = LD(1) / static_cast<LD>(n);
        for (auto& v : data) v = std::conj(v) * inv_n;
    }
}

std::vector<Complex> execute(const TransformPlan& p, std::vector<Complex> data) {
    TransformScratch scratch(p);
    execute(p, std::span<Complex>(data), scratch);
    return data;
}

std::vector<Complex> twiddled_half_transform(std::span<const Complex> x, std::uint64_t q,
                                             const TransformPlan* forward_plan) {
    if (q < 3 || q % 2 == 0) throw DomainError("twiddled_half_transform: q must be an odd prime");
    const std::size_t n = (q - 1) / 2;
    if (x.size() != n) throw ContractError("twiddled_half_transform: length must be (q-1)/2");
    TransformPlan local;
    if (!forward_plan) {
        local = plan(n, Direction::Forward);
        forward_plan = &local;
    }
    const TransformPlan& p = *forward_plan;
    if (p.length() != n || p.direction() != Direction::Forward)
        throw ContractError("twiddled_half_transform: plan does not match");
    std::vector<Complex> out(n);
    if (p.dd_) {
        RootSource<ComplexDD> tw(q - 1);
        std::vector<ComplexDD> v(n + p.scratch_);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = ComplexDD{detail::dd_from(x[k].real()), detail::dd_from(x[k].imag())} * tw(k);
        p.dd_->run(v.data(), v.data() + n);
        for (std::size_t k = 0; k < n; ++k) out[k] = {detail::dd_to_ld(v[k].re), detail::dd_to_ld(v[k].im)};
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = x[k] * unit_root(k, q - 1);
    return execute(p, std::move(out));
}

namespace {

// Z = F(a + i b) for real a, b; the spectrum of a real input satisfies
// X[partner(j)] = conj X[j], which separates the two.
template <class C, class Partner>
SpectrumPair separate(const C* z, std::size_t n, Partner partner) {
    using A = Arith<C>;
    SpectrumPair out{std::vector<Complex>(n), std::vector<Complex>(n)};
    const auto half = A::real(0.5L);
    for (std::size_t j = 0; j < n; ++j) {
        const C w = A::conj(z[partner(j)]);
        const C s = (z[j] + w) * half;
        const C d = (z[j] - w) * half;  // i * B[j]
        if constexpr (std::is_same_v<C, Complex>) {
            out.first[j] = s;
            out.second[j] = {d.imag(), -d.real()};
        } else {
            out.first[j] = {detail::dd_to_ld(s.re), detail::dd_to_ld(s.im)};
            out.second[j] = {detail::dd_to_ld(d.im), -detail::dd_to_ld(d.re)};
        }
    }
    return out;
}

void check_pair(const TransformPlan& p, std::size_t n, std::size_t na, std::size_t nb) {
    if (p.length() != n || p.direction() != Direction::Forward || !p.materialized())
        throw ContractError("real pair transform needs a materialized forward plan of length " + std::to_string(n));
    if (na != n || nb != n) throw ContractError("real pair transform: sequence length mismatch");
}

}  // namespace

SpectrumPair forward_real_pair(const TransformPlan& p, std::span<const TransformReal> a,
                               std::span<const TransformReal> b) {
    const std::size_t n = p.length();
    check_pair(p, n, a.size(), b.size());
    auto partner = [n](std::size_t j) { return j == 0 ? 0 : n - j; };
    if (p.dd_) {
        std::vector<ComplexDD> v(n + p.scratch_);
        for (std::size_t k = 0; k < n; ++k) v[k] = {detail::dd_from(a[k]), detail::dd_from(b[k])};
        p.dd_->run(v.data(), v.data() + n);
        return separate(v.data(), n, partner);
    }
    std::vector<Complex> v(n + p.scratch_);
    for (std::size_t k = 0; k < n; ++k) v[k] = {a[k], b[k]};
    p.ext_->run(v.data(), v.data() + n);
    return separate(v.data(), n, partner);
}

SpectrumPair twiddled_half_transform_pair(std::span<const TransformReal> a, std::span<const TransformReal> b,
                                          std::uint64_t q, const TransformPlan& p) {
    if (q < 3 || q % 2 == 0) throw DomainError("twiddled_half_transform_pair: q must be an odd prime");
    const std::size_t n = (q - 1) / 2;
    check_pair(p, n, a.size(), b.size());
    auto partner = [n](std::size_t m) { return n - 1 - m; };
    if (p.dd_) {
        RootSource<ComplexDD> tw(q - 1);
        std::vector<ComplexDD> v(n + p.scratch_);
        for (std::size_t k = 0; k < n; ++k) v[k] = ComplexDD{detail::dd_from(a[k]), detail::dd_from(b[k])} * tw(k);
        p.dd_->run(v.data(), v.data() + n);
        return separate(v.data(), n, partner);
    }
    std::vector<Complex> v(n + p.scratch_);
    for (std::size_t k = 0; k < n; ++k) v[k] = Complex(a[k], b[k]) * unit_root(k, q - 1);
    p.ext_->run(v.data(), v.data() + n);
    return separate(v.data(), n, partner);
}

std::vector<Complex> naive_dft(std::span<const Complex> x, Direction dir) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto jk = static_cast<std::uint64_t>((static_cast<unsigned __int128>(j) * k) % n);
            Complex w = unit_root(jk, n);
            if (dir == Direction::Inverse) w = std::conj(w);
            acc += x[k] * w;
        }
        out[j] = dir == Direction::Inverse ? acc / static_cast<LD>(n) : acc;
    }
    return out;
}

}  // namespace ekscan
