#include "dhaiq/gf.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace dhaiq {

namespace {

// Index u holds a primitive polynomial of degree u, except u = 8 which keeps
// the AES modulus (irreducible, not primitive).
constexpr std::array<std::uint32_t, 17> kModuli = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11B,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

int poly_degree(std::uint32_t p)
{
    return p == 0 ? -1 : 31 - std::countl_zero(p);
}

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m)
{
    const int dm = poly_degree(m);
    for (int da = poly_degree(a); da >= dm; da = poly_degree(a))
        a ^= m << (da - dm);
    return a;
}

} // namespace

GaloisField::GaloisField(int u) : GaloisField(u, default_modulus(u)) {}

GaloisField::GaloisField(int u, std::uint32_t modulus)
    : degree_(u), order_(1u << u), modulus_(modulus)
{
    if (u < kMinDegree || u > kMaxDegree)
        throw std::invalid_argument("field degree must be in [1, 16], got " + std::to_string(u));
    if (poly_degree(modulus) != u)
        throw std::invalid_argument("modulus degree does not match field degree");
    if (!is_irreducible(modulus))
        throw std::invalid_argument("modulus is not irreducible over GF(2)");
    build_tables();
}

std::uint32_t GaloisField::default_modulus(int u)
{
    if (u < kMinDegree || u > kMaxDegree)
        throw std::invalid_argument("field degree must be in [1, 16], got " + std::to_string(u));
    return kModuli[static_cast<std::size_t>(u)];
}

bool GaloisField::is_irreducible(std::uint32_t poly)
{
    const int d = poly_degree(poly);
    if (d < 1)
        return false;
    for (std::uint32_t divisor = 2; poly_degree(divisor) <= d / 2; ++divisor)
        if (poly_mod(poly, divisor) == 0)
            return false;
    return true;
}

Symbol GaloisField::mul_bitwise(Symbol a, Symbol b) const
{
    std::uint32_t x = a.value;
    std::uint32_t y = b.value;
    std::uint32_t acc = 0;
    while (y != 0) {
        if (y & 1u)
            acc ^= x;
        y >>= 1;
        x <<= 1;
        if (x & order_)
            x ^= modulus_;
    }
    return Symbol(static_cast<std::uint16_t>(acc));
}

void GaloisField::build_tables()
{
    const std::uint32_t group = order_ - 1;

    // Smallest element whose powers run through the whole multiplicative group.
    for (std::uint32_t g = 2; g < order_; ++g) {
        std::uint32_t x = g;
        std::uint32_t period = 1;
        while (x != 1) {
            x = mul_bitwise(Symbol(static_cast<std::uint16_t>(x)), Symbol(static_cast<std::uint16_t>(g))).value;
            ++period;
        }
        if (period == group) {
            generator_ = Symbol(static_cast<std::uint16_t>(g));
            break;
        }
    }
    if (group == 1)
        generator_ = Symbol(1);

    exp_.assign(2 * static_cast<std::size_t>(group), 0);
    log_.assign(order_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
        exp_[i] = static_cast<std::uint16_t>(x);
        exp_[i + group] = static_cast<std::uint16_t>(x);
        log_[x] = i;
        x = mul_bitwise(Symbol(static_cast<std::uint16_t>(x)), generator_).value;
    }
}

Symbol GaloisField::inv(Symbol a) const
{
    if (a.is_zero())
        throw std::domain_error("zero has no inverse");
    const std::uint32_t group = order_ - 1;
    return Symbol(exp_[(group - log_[a.value]) % group]);
}

} // namespace dhaiq
