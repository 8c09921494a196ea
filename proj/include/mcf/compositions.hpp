#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mcf/errors.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

/// Ordered parts summing to `total`; `index` is the 1-based position in
/// standard order (lexicographic, larger parts first).
struct Composition {
    std::vector<int> parts;
    int total = 0;
    std::uint64_t index = 0;

    int part_count() const { return static_cast<int>(parts.size()); }
    int sign() const { return (parts.size() % 2 == 1) ? 1 : -1; } // (-1)^{parts-1}
};

struct SignedMultinomial {
    Composition composition;
    BigInt value; // total! / prod(parts!)
    int sign = 1;

    BigInt signed_value() const { return sign > 0 ? value : BigInt(-value); }
};

inline BigInt factorial(int n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return BigInt(0);
    BigInt b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

inline BigInt multinomial(const std::vector<int>& parts) {
    int total = 0;
    for (int p : parts) total += p;
    BigInt v = factorial(total);
    for (int p : parts) {
        BigInt d = factorial(p);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
    }
    return v;
}

/// All 2^{n-1} compositions of n in standard order. Generated largest
/// first-part first, recursively, which is order-correct by construction.
inline std::vector<Composition> compositions_standard_order(int n) {
    if (n < 1) throw PreconditionViolated("compositions need n >= 1");
    if (n > 26) throw PreconditionViolated("2^{n-1} compositions would be excessive");
    std::vector<Composition> out;
    out.reserve(std::size_t(1) << (n - 1));
    std::vector<int> stack;
    auto emit = [&](auto&& self, int rest) -> void {
        if (rest == 0) {
            Composition c;
            c.parts = stack;
            c.total = n;
            c.index = out.size() + 1;
            out.push_back(std::move(c));
            return;
        }
        for (int p = rest; p >= 1; --p) {
            stack.push_back(p);
            self(self, rest - p);
            stack.pop_back();
        }
    };
    emit(emit, n);
    return out;
}

inline SignedMultinomial signed_multinomial(const Composition& c) {
    SignedMultinomial out;
    out.composition = c;
    out.value = multinomial(c.parts);
    out.sign = c.sign();
    return out;
}

/// Signed row-(n+1) sum filtered to standard-order indices i = 1 mod 2^{n-k};
/// equals binom(n, k) (-1)^k.
inline BigInt tree_prefix_sum(int n, int k) {
    if (k < 0 || k > n) throw PreconditionViolated("need 0 <= k <= n");
    auto row = compositions_standard_order(n + 1);
    const std::uint64_t step = std::uint64_t(1) << (n - k);
    BigInt acc(0);
    for (std::uint64_t i = 1; i <= row.size(); i += step) {
        const Composition& c = row[i - 1];
        BigInt v = multinomial(c.parts);
        acc += (c.sign() > 0) ? v : BigInt(-v);
    }
    return acc;
}

/// Full signed row sum S_n; equals (-1)^{n-1}.
inline BigInt row_sum(int n) {
    BigInt acc(0);
    for (const Composition& c : compositions_standard_order(n)) {
        BigInt v = multinomial(c.parts);
        acc += (c.sign() > 0) ? v : BigInt(-v);
    }
    return acc;
}

/// Both sides of the alternating partial-fraction identity
///   sum_{j=0}^{n-2} binom(n-2, j)(-1)^j / ((j+1)x + y)
///     = (n-2)! x^{n-2} / ((x+y)(2x+y)...((n-1)x+y)).
/// Returned separately so tests can compare them.
inline std::pair<Rational, Rational> partial_fraction_sides(int n, const Rational& x,
                                                            const Rational& y) {
    if (n < 2) throw PreconditionViolated("identity needs n >= 2");
    Rational lhs(0);
    for (int j = 0; j <= n - 2; ++j) {
        Rational denom = Rational(j + 1) * x + y;
        if (denom == 0) throw PoleHit("denominator (j+1)x + y vanishes");
        Rational term = Rational(binomial(n - 2, j)) / denom;
        lhs += (j % 2 == 0) ? term : -term;
    }
    Rational num(factorial(n - 2));
    for (int e = 0; e < n - 2; ++e) num *= x;
    Rational denom(1);
    for (int r = 1; r <= n - 1; ++r) {
        Rational f = Rational(r) * x + y;
        if (f == 0) throw PoleHit("denominator r x + y vanishes");
        denom *= f;
    }
    return {lhs, num / denom};
}

/// Alternating-binomial form of the p-consecutive-factor telescope:
///   sum_{b>=1} prod_{j=0}^{p-1} 1/((b+j)a+s)
///     = 1/((p-1)! a^{p-1}) sum_{j=0}^{p-2} (-1)^j binom(p-2, j)/((j+1)a+s).
/// For p = 5 the inner coefficients are (1, -3, 3, -1) over prefactor 1/24.
struct TelescopeForm {
    std::vector<BigInt> signed_coefficients; // (-1)^j binom(p-2, j)
    BigInt prefactor_denominator;            // (p-1)!
    Rational value;
};

inline TelescopeForm alternating_telescope_form(int p, const Rational& a, const Rational& s) {
    if (p < 2) throw PreconditionViolated("telescope needs at least two factors");
    TelescopeForm out;
    out.prefactor_denominator = factorial(p - 1);
    Rational inner(0);
    for (int j = 0; j <= p - 2; ++j) {
        BigInt c = binomial(p - 2, j);
        if (j % 2 == 1) c = -c;
        out.signed_coefficients.push_back(c);
        inner += Rational(c) / (Rational(j + 1) * a + s);
    }
    Rational scale = Rational(BigInt(1), out.prefactor_denominator);
    for (int e = 0; e < p - 1; ++e) scale /= a;
    out.value = scale * inner;
    return out;
}

} // namespace mcf
