#pragma once

// Scalar types used across the library. Everything numeric is templated on
// one of these; the working type for a given bit target is picked by
// dispatch_scalar().

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

namespace ekscan {

namespace bmp = boost::multiprecision;

/// 166-bit MPFR float (50 decimal digits), stack allocated.
using Mp50 = bmp::number<bmp::mpfr_float_backend<50, bmp::allocate_stack>, bmp::et_off>;
/// 333-bit MPFR float (100 decimal digits), stack allocated.
using Mp100 = bmp::number<bmp::mpfr_float_backend<100, bmp::allocate_stack>, bmp::et_off>;

/// Working type for coefficient-table construction, regardless of target.
using BuildReal = Mp100;

/// Scalar used for all transforms (64-bit mantissa on x86).
using TransformReal = long double;
using TransformComplex = std::complex<TransformReal>;

template <class Real>
inline constexpr int mantissa_bits = std::numeric_limits<Real>::digits;

/// Unit roundoff of the arithmetic (2^-64 for x87 long double).
template <class Real>
inline Real unit_roundoff() {
    return std::numeric_limits<Real>::epsilon() / 2;
}

template <class Real>
inline Real pi_v() {
    return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real ln2_v() {
    return boost::math::constants::ln_two<Real>();
}

/// 2^e exactly.
template <class Real>
inline Real pow2(int e) {
    using std::ldexp;
    return ldexp(Real(1), e);
}

template <class To, class From>
inline To narrow(const From& x) {
    if constexpr (std::is_same_v<To, From>) {
        return x;
    } else if constexpr (std::is_floating_point_v<To> && std::is_floating_point_v<From>) {
        return static_cast<To>(x);
    } else if constexpr (std::is_floating_point_v<To>) {
        return x.template convert_to<To>();
    } else {
        return To(x);
    }
}

template <class Real>
inline std::string to_string(const Real& x, int digits = 0) {
    std::ostringstream os;
    if (digits <= 0) digits = std::numeric_limits<Real>::digits10 + 2;
    os.precision(digits);
    os << x;
    return os.str();
}

enum class ScalarKind { LongDouble, Mp50, Mp100 };

/// Smallest scalar that leaves at least 16 guard bits above `bits`.
inline ScalarKind scalar_for_bits(int bits) {
    if (bits + 16 <= mantissa_bits<long double>) return ScalarKind::LongDouble;
    if (bits + 32 <= mantissa_bits<Mp50>) return ScalarKind::Mp50;
    return ScalarKind::Mp100;
}

/// Calls f(Real{}) with the scalar type appropriate for `bits`.
template <class F>
decltype(auto) dispatch_scalar(int bits, F&& f) {
    switch (scalar_for_bits(bits)) {
        case ScalarKind::LongDouble: return f((long double)0);
        case ScalarKind::Mp50: return f(Mp50{});
        default: return f(Mp100{});
    }
}

}  // namespace ekscan
