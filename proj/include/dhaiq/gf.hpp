#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "dhaiq/rng.hpp"

namespace dhaiq {

/// One symbol of GF(2^u). The value is always below 2^u of the owning field.
struct Symbol
{
    std::uint16_t value = 0;

    constexpr Symbol() = default;
    constexpr explicit Symbol(std::uint16_t v) : value(v) {}

    constexpr bool is_zero() const { return value == 0; }
    friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

/// Binary extension field GF(2^u), 1 <= u <= 16.
///
/// Multiplication and inversion go through log/antilog tables built once at
/// construction. The tables are immutable afterwards, so one field object can
/// be shared freely between threads.
class GaloisField
{
public:
    static constexpr int kMinDegree = 1;
    static constexpr int kMaxDegree = 16;

    /// Default field: u = 8 with modulus x^8 + x^4 + x^3 + x + 1.
    GaloisField() : GaloisField(8) {}

    /// Field of degree u with the built-in modulus for that degree.
    explicit GaloisField(int u);

    /// Field of degree u with a caller-supplied modulus (bit u must be set).
    /// Throws std::invalid_argument if the polynomial is not irreducible.
    GaloisField(int u, std::uint32_t modulus);

    int degree() const { return degree_; }
    std::uint32_t order() const { return order_; }
    std::uint32_t modulus() const { return modulus_; }
    /// The primitive element the log tables are built from.
    Symbol generator() const { return generator_; }

    bool contains(Symbol a) const { return a.value < order_; }

    static constexpr Symbol add(Symbol a, Symbol b) { return Symbol(a.value ^ b.value); }
    static constexpr Symbol sub(Symbol a, Symbol b) { return add(a, b); }

    Symbol mul(Symbol a, Symbol b) const
    {
        if (a.is_zero() || b.is_zero())
            return Symbol{};
        return Symbol(exp_[log_[a.value] + log_[b.value]]);
    }

    /// Throws std::domain_error for zero.
    Symbol inv(Symbol a) const;

    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    /// Uniform over all 2^u symbols, zero included.
    Symbol random_symbol(Rng& rng) const
    {
        return Symbol(static_cast<std::uint16_t>(rng.below(order_)));
    }

    /// Shift-and-reduce product, independent of the tables.
    Symbol mul_bitwise(Symbol a, Symbol b) const;

    /// Built-in modulus for degree u.
    static std::uint32_t default_modulus(int u);

    /// Trial division by every polynomial of degree 1..u/2.
    static bool is_irreducible(std::uint32_t poly);

private:
    void build_tables();

    int degree_ = 0;
    std::uint32_t order_ = 0;
    std::uint32_t modulus_ = 0;
    Symbol generator_;
    std::vector<std::uint16_t> exp_; // length 2(q-1), so log sums need no reduction
    std::vector<std::uint32_t> log_;
};

} // namespace dhaiq
