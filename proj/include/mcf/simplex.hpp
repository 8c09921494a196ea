#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

/// Point of the ordered simplex {1 >= x_1 >= ... >= x_n >= 0}.
/// Coordinates are 0-indexed in code: coords[i] is x_{i+1}.
template <class S>
struct SimplexPoint {
    std::vector<S> coords;

    SimplexPoint() = default;
    explicit SimplexPoint(std::vector<S> c) : coords(std::move(c)) {}

    int n() const { return static_cast<int>(coords.size()); }
    const S& first() const { return coords.front(); }
    const S& last() const { return coords.back(); }
};

template <class S>
bool in_simplex(const std::vector<S>& x) {
    if (x.empty()) return false;
    if constexpr (scalar_traits<S>::exact) {
        if (x.front() > 1 || x.back() < 0) return false;
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            if (x[i] < x[i + 1]) return false;
    } else {
        const double tol = scalar_traits<double>::tol;
        if (x.front() > 1 + tol || x.back() < -tol) return false;
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            if (x[i] < x[i + 1] - tol) return false;
    }
    return true;
}

template <class S>
SimplexPoint<S> make_simplex_point(std::vector<S> coords) {
    if (!in_simplex(coords))
        throw NotInSimplex("coordinates violate 1 >= x_1 >= ... >= x_n >= 0");
    return SimplexPoint<S>(std::move(coords));
}

/// Vector in the cone closure {x_0 >= x_1 >= ... >= x_n >= 0}. Strict
/// ordering is the cone interior; boundary representatives are allowed
/// and tracked by the `boundary` flag.
template <class S>
struct HomogeneousVector {
    std::vector<S> coords; // length n + 1, coords[0] is x_0
    bool boundary = false;

    HomogeneousVector() = default;
    explicit HomogeneousVector(std::vector<S> c) : coords(std::move(c)) {}

    int n() const { return static_cast<int>(coords.size()) - 1; }
};

template <class S>
HomogeneousVector<S> make_cone_vector(std::vector<S> coords) {
    if (coords.size() < 2) throw NotInCone("need at least two coordinates");
    bool strict = true;
    if constexpr (scalar_traits<S>::exact) {
        if (coords.back() < 0) throw NotInCone("negative coordinate");
        for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
            if (coords[i] < coords[i + 1]) throw NotInCone("coordinates not non-increasing");
            if (coords[i] == coords[i + 1]) strict = false;
        }
        if (coords.back() == 0) strict = false;
    } else {
        const double tol = scalar_traits<double>::tol;
        if (coords.back() < -tol) throw NotInCone("negative coordinate");
        for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
            if (coords[i] < coords[i + 1] - tol) throw NotInCone("coordinates not non-increasing");
            if (coords[i] <= coords[i + 1] + tol) strict = false;
        }
        if (coords.back() <= tol) strict = false;
    }
    HomogeneousVector<S> v(std::move(coords));
    v.boundary = !strict;
    return v;
}

template <class S>
S l1_norm(const std::vector<S>& v) {
    S total = S(0);
    for (const S& c : v) total += (c < S(0)) ? S(-c) : c;
    return total;
}

/// i(x) = (1, x_1, ..., x_n).
template <class S>
HomogeneousVector<S> embed(const SimplexPoint<S>& x) {
    std::vector<S> c;
    c.reserve(x.coords.size() + 1);
    c.push_back(S(1));
    for (const S& v : x.coords) c.push_back(v);
    HomogeneousVector<S> h(std::move(c));
    h.boundary = true; // 1 = x_1 or x_n = 0 may hold; callers needing interior re-check
    return h;
}

/// P(x_0, ..., x_n) = (x_1/x_0, ..., x_n/x_0); left inverse of embed.
template <class S>
SimplexPoint<S> project(const HomogeneousVector<S>& v) {
    if (is_zero(v.coords[0])) throw ZeroFirstCoordinate("x_0 = 0 in projection");
    std::vector<S> c(v.coords.size() - 1);
    for (std::size_t i = 1; i < v.coords.size(); ++i) c[i - 1] = v.coords[i] / v.coords[0];
    return SimplexPoint<S>(std::move(c));
}

/// P^S(x) = x / ||x||_1, the unit-norm slice representative.
template <class S>
HomogeneousVector<S> slice_normalize(const HomogeneousVector<S>& v) {
    S norm = l1_norm(v.coords);
    if (is_zero(norm)) throw ZeroVector("cannot normalize the zero vector");
    std::vector<S> c(v.coords.size());
    for (std::size_t i = 0; i < v.coords.size(); ++i) c[i] = v.coords[i] / norm;
    HomogeneousVector<S> out(std::move(c));
    out.boundary = v.boundary;
    return out;
}

} // namespace mcf
