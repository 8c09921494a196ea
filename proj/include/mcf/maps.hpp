#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/scalar.hpp"
#include "mcf/simplex.hpp"

namespace mcf {

struct DigitSequence {
    std::vector<long long> digits;
    bool terminated = false;

    bool operator==(const DigitSequence& o) const {
        return digits == o.digits && terminated == o.terminated;
    }
};

struct BitSequence {
    std::vector<int> bits; // entries in {0, 1}
    bool terminated = false;

    bool operator==(const BitSequence& o) const {
        return bits == o.bits && terminated == o.terminated;
    }
};

enum class Flavor { Fast, Slow };

namespace detail {
// Digits beyond this are unrepresentable overflow from denormal-range
// coordinates; the orbit is treated as terminated there.
inline constexpr double digit_cap = 9.0e18;
} // namespace detail

/// b = floor((1 - x_1) / x_n); the index of the sub-simplex containing x.
template <class S>
long long digit(const SimplexPoint<S>& x) {
    if (is_zero(x.last())) throw ZeroLastCoordinate("digit undefined: x_n = 0");
    if constexpr (scalar_traits<S>::exact) {
        Rational q = (Rational(1) - x.first()) / x.last();
        long long b = scalar_traits<Rational>::floor_to_int(q);
        return b < 0 ? 0 : b;
    } else {
        double q = (1.0 - x.first()) / x.last();
        if (!(q < detail::digit_cap))
            throw ZeroLastCoordinate("digit overflow: x_n below representable range");
        long long b = static_cast<long long>(std::floor(q));
        return b < 0 ? 0 : b; // roundoff guard at the x_1 = 1 face
    }
}

/// One application of the fast (multiplicative) map
/// T(x) = (x_2/x_1, ..., x_n/x_1, (1 - x_1 - b x_n)/x_1); Gauss map at n = 1.
template <class S>
std::pair<SimplexPoint<S>, long long> fast_step(const SimplexPoint<S>& x) {
    if (is_zero(x.first())) throw ZeroFirstCoordinate("fast map undefined: x_1 = 0");
    long long b = digit(x);
    const int n = x.n();
    std::vector<S> y(n);
    for (int i = 0; i + 1 < n; ++i) y[i] = x.coords[i + 1] / x.coords[0];
    S rem = (S(1) - x.coords[0] - scalar_from_int<S>(b) * x.coords[n - 1]) / x.coords[0];
    if constexpr (!scalar_traits<S>::exact) {
        if (rem < 0 && rem > -scalar_traits<double>::tol) rem = 0;
    }
    y[n - 1] = rem;
    return {SimplexPoint<S>(std::move(y)), b};
}

/// One application of the slow (additive) map; Farey map at n = 1.
/// The dividing face x_1 + x_n = 1 belongs to the t_1 branch.
template <class S>
std::pair<SimplexPoint<S>, int> slow_step(const SimplexPoint<S>& x) {
    if (is_zero(x.last())) throw ZeroLastCoordinate("slow map undefined: x_n = 0");
    if (is_zero(x.first())) throw ZeroFirstCoordinate("slow map undefined: x_1 = 0");
    const int n = x.n();
    std::vector<S> y(n);
    if (x.first() + x.last() > S(1)) {
        // t_0(x) = (x_2/x_1, ..., x_n/x_1, (1 - x_1)/x_1)
        for (int i = 0; i + 1 < n; ++i) y[i] = x.coords[i + 1] / x.coords[0];
        S rem = (S(1) - x.coords[0]) / x.coords[0];
        if constexpr (!scalar_traits<S>::exact) {
            if (rem < 0 && rem > -scalar_traits<double>::tol) rem = 0;
        }
        y[n - 1] = rem;
        return {SimplexPoint<S>(std::move(y)), 0};
    }
    // t_1(x) = (x_1/(1 - x_n), ..., x_n/(1 - x_n))
    S denom = S(1) - x.last();
    for (int i = 0; i < n; ++i) y[i] = x.coords[i] / denom;
    return {SimplexPoint<S>(std::move(y)), 1};
}

/// Integer branch matrix T_b: shift rows plus last row e_0 - e_1 - b e_n.
/// At n = 1 the e_1 and e_n contributions land in the same column.
inline std::vector<std::vector<long long>> branch_matrix(int n, long long b) {
    std::vector<std::vector<long long>> m(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i < n; ++i) m[i][i + 1] = 1;
    m[n][0] += 1;
    m[n][1] -= 1;
    m[n][n] -= b;
    return m;
}

/// Homogeneous step T^H(v) = (x_1, ..., x_n, x_0 - x_1 - b x_n) = T_b v.
template <class S>
struct HomStepResult {
    HomogeneousVector<S> image;
    long long b;
    std::vector<std::vector<long long>> matrix;
};

template <class S>
HomStepResult<S> hom_step(const HomogeneousVector<S>& v) {
    const int n = v.n();
    if (is_zero(v.coords[n])) throw ZeroLastCoordinate("cone map undefined: x_n = 0");
    // digit of the projective point: floor((x_0 - x_1)/x_n)
    long long b;
    if constexpr (scalar_traits<S>::exact) {
        if (v.coords[0] < v.coords[1]) throw NotInCone("x_0 < x_1");
        b = scalar_traits<Rational>::floor_to_int((v.coords[0] - v.coords[1]) / v.coords[n]);
    } else {
        if (v.coords[0] < v.coords[1] - scalar_traits<double>::tol) throw NotInCone("x_0 < x_1");
        double q = (v.coords[0] - v.coords[1]) / v.coords[n];
        if (!(q < detail::digit_cap)) throw ZeroLastCoordinate("digit overflow");
        b = static_cast<long long>(std::floor(q));
    }
    if (b < 0) b = 0;
    std::vector<S> y(n + 1);
    for (int i = 0; i < n; ++i) y[i] = v.coords[i + 1];
    y[n] = v.coords[0] - v.coords[1] - scalar_from_int<S>(b) * v.coords[n];
    HomogeneousVector<S> img(std::move(y));
    img.boundary = true; // image may sit on a face; callers re-validate if needed
    return {std::move(img), b, branch_matrix(n, b)};
}

/// k-th preimage of the fast map: y with T(y) = x and digit(y) = k.
/// The divisor is 1 + k x_{n-1} + x_n, with x_{n-1} read as the homogeneous
/// coordinate 1 when n = 1 (Gauss preimage 1/(k + 1 + x)).
template <class S>
SimplexPoint<S> inverse_branch_fast(const SimplexPoint<S>& x, long long k) {
    const int n = x.n();
    S w = (n >= 2) ? x.coords[n - 2] : S(1);
    S denom = S(1) + scalar_from_int<S>(k) * w + x.coords[n - 1];
    std::vector<S> y(n);
    y[0] = S(1) / denom;
    for (int i = 1; i < n; ++i) y[i] = x.coords[i - 1] / denom;
    return SimplexPoint<S>(std::move(y));
}

/// Preimages under the two slow branches: (t_0^{-1}(x), t_1^{-1}(x)).
template <class S>
std::pair<SimplexPoint<S>, SimplexPoint<S>> inverse_branches_slow(const SimplexPoint<S>& x) {
    const int n = x.n();
    S denom = S(1) + x.coords[n - 1];
    std::vector<S> y0(n), y1(n);
    y0[0] = S(1) / denom;
    for (int i = 1; i < n; ++i) y0[i] = x.coords[i - 1] / denom;
    for (int i = 0; i < n; ++i) y1[i] = x.coords[i] / denom;
    return {SimplexPoint<S>(std::move(y0)), SimplexPoint<S>(std::move(y1))};
}

template <class S>
struct FastOrbit {
    DigitSequence digits;
    std::vector<SimplexPoint<S>> points; // points[k] = T^k(x)
};

template <class S>
struct SlowOrbit {
    BitSequence bits;
    std::vector<SimplexPoint<S>> points;
};

template <class S>
bool orbit_alive(const SimplexPoint<S>& x) {
    if constexpr (scalar_traits<S>::exact)
        return x.last() > 0 && x.first() > 0;
    else
        return x.last() > 0 && x.first() > 0 && std::isfinite(x.last());
}

/// Iterates the fast map up to m steps; stops early (terminated = true) when
/// the orbit lands on the x_n = 0 face instead of erroring the whole run.
template <class S>
FastOrbit<S> orbit_fast(const SimplexPoint<S>& x0, int m) {
    FastOrbit<S> out;
    out.points.reserve(m + 1);
    out.points.push_back(x0);
    for (int k = 0; k < m; ++k) {
        const SimplexPoint<S>& cur = out.points.back();
        if (!orbit_alive(cur)) {
            out.digits.terminated = true;
            return out;
        }
        try {
            auto [next, b] = fast_step(cur);
            out.digits.digits.push_back(b);
            out.points.push_back(std::move(next));
        } catch (const Error&) {
            out.digits.terminated = true;
            return out;
        }
    }
    return out;
}

template <class S>
SlowOrbit<S> orbit_slow(const SimplexPoint<S>& x0, int m) {
    SlowOrbit<S> out;
    out.points.reserve(m + 1);
    out.points.push_back(x0);
    for (int k = 0; k < m; ++k) {
        const SimplexPoint<S>& cur = out.points.back();
        if (!orbit_alive(cur)) {
            out.bits.terminated = true;
            return out;
        }
        try {
            auto [next, bit] = slow_step(cur);
            out.bits.bits.push_back(bit);
            out.points.push_back(std::move(next));
        } catch (const Error&) {
            out.bits.terminated = true;
            return out;
        }
    }
    return out;
}

/// Fast digit b corresponds to the slow block 1^b 0 (T = t_0 ∘ t_1^b).
inline BitSequence fast_to_slow(const DigitSequence& digits) {
    BitSequence out;
    out.terminated = digits.terminated;
    for (long long b : digits.digits) {
        for (long long i = 0; i < b; ++i) out.bits.push_back(1);
        out.bits.push_back(0);
    }
    return out;
}

/// Inverse of fast_to_slow; requires complete blocks (trailing 0).
inline DigitSequence slow_to_fast(const BitSequence& bits) {
    DigitSequence out;
    out.terminated = bits.terminated;
    long long run = 0;
    for (int b : bits.bits) {
        if (b == 1) {
            ++run;
        } else {
            out.digits.push_back(run);
            run = 0;
        }
    }
    if (run != 0) throw IncompleteBlock("bit sequence ends mid-run of ones");
    return out;
}

// ---- allocation-free double-precision steps for long experiments ----

/// In-place fast step; returns the digit, or -1 when the orbit terminates.
inline long long fast_step_inplace(std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    const double x1 = x[0], xn = x[n - 1];
    if (!(xn > 0.0) || !(x1 > 0.0)) return -1;
    const double q = (1.0 - x1) / xn;
    if (!(q < detail::digit_cap)) return -1;
    long long b = static_cast<long long>(std::floor(q));
    if (b < 0) b = 0;
    const double inv = 1.0 / x1;
    double rem = (1.0 - x1 - static_cast<double>(b) * xn) * inv;
    if (rem < 0.0) rem = 0.0;
    for (int i = 0; i + 1 < n; ++i) x[i] = x[i + 1] * inv;
    x[n - 1] = rem;
    return b;
}

/// In-place slow step; returns the bit, or -1 when the orbit terminates.
inline int slow_step_inplace(std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    const double x1 = x[0], xn = x[n - 1];
    if (!(xn > 0.0) || !(x1 > 0.0)) return -1;
    if (x1 + xn > 1.0) {
        const double inv = 1.0 / x1;
        double rem = (1.0 - x1) * inv;
        if (rem < 0.0) rem = 0.0;
        for (int i = 0; i + 1 < n; ++i) x[i] = x[i + 1] * inv;
        x[n - 1] = rem;
        return 0;
    }
    const double inv = 1.0 / (1.0 - xn);
    for (int i = 0; i < n; ++i) x[i] *= inv;
    return 1;
}

} // namespace mcf
