#pragma once

#include <cstddef>
#include <cstdint>

// GF(2^8) arithmetic with the 0x11d reduction polynomial, backed by
// log/antilog tables built once at startup.
namespace core::gf {

using Elem = std::uint8_t;

inline constexpr unsigned kFieldBits = 8;
inline constexpr unsigned kFieldSize = 256;
inline constexpr unsigned kReductionPoly = 0x11d;  // x^8+x^4+x^3+x^2+1

Elem mul(Elem a, Elem b);
Elem div(Elem a, Elem b);  // throws std::domain_error if b == 0
Elem inv(Elem a);          // throws std::domain_error if a == 0
Elem pow(Elem a, unsigned e);

// dst[i] ^= coef * src[i], bytewise over a block payload.
void mul_add(std::uint8_t* dst, const std::uint8_t* src, std::size_t len, Elem coef);

}  // namespace core::gf
