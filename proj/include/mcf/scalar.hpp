#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include <gmpxx.h>

#include "mcf/errors.hpp"

namespace mcf {

using BigInt   = mpz_class;
using Rational = mpq_class;

/// Number-kind traits. The library is generic over double (workhorse) and
/// exact rationals (oracle); no operation silently converts between them.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    // Absolute tolerance for membership / sign checks in float mode.
    static constexpr double tol = 1e-12;
    static double from_fraction(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double to_double(double v) { return v; }
    static long long floor_to_int(double v) {
        return static_cast<long long>(std::floor(v));
    }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_fraction(long num, long den) {
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    static double to_double(const Rational& v) { return v.get_d(); }
    static long long floor_to_int(const Rational& v) {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        if (!q.fits_slong_p())
            throw PreconditionViolated("floor does not fit in a machine integer");
        return q.get_si();
    }
};

// gmpxx has no long long constructors; long is 64-bit on every platform
// this library targets.
inline BigInt big_int(long long v) { return BigInt(static_cast<long>(v)); }

template <class S>
S scalar_from_int(long long v);
template <>
inline double scalar_from_int<double>(long long v) {
    return static_cast<double>(v);
}
template <>
inline Rational scalar_from_int<Rational>(long long v) {
    return Rational(static_cast<long>(v));
}

template <class S>
inline bool is_zero(const S& v) {
    if constexpr (scalar_traits<S>::exact)
        return v == 0;
    else
        return v == 0.0;
}

/// Parses "p/q" or a decimal literal into an exact rational.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        // base fixed at 10: leading zeros must not trigger octal detection
        if (slash != std::string::npos) {
            Rational q(text, 10);
            q.canonicalize();
            if (q.get_den() == 0) throw ParseError("zero denominator: " + text);
            return q;
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) {
            return Rational(BigInt(text, 10));
        }
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw ParseError("bad number: " + text);
        BigInt num(digits, 10);
        BigInt den = 1;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad number: " + text);
    }
}

} // namespace mcf
