#include "core/gf256.hpp"

#include <array>
#include <stdexcept>

namespace core::gf {
namespace {

struct Tables {
  std::array<Elem, kFieldSize> log{};
  std::array<Elem, 2 * kFieldSize> exp{};  // doubled to skip the mod in mul

  Tables() {
    unsigned b = 1;
    for (unsigned i = 0; i < kFieldSize - 1; ++i) {
      exp[i] = static_cast<Elem>(b);
      log[b] = static_cast<Elem>(i);
      b <<= 1;
      if (b & kFieldSize) b ^= kReductionPoly;
    }
    for (unsigned i = kFieldSize - 1; i < 2 * kFieldSize; ++i)
      exp[i] = exp[i % (kFieldSize - 1)];
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

Elem mul(Elem a, Elem b) {
  if (a == 0 || b == 0) return 0;
  const Tables& t = tables();
  return t.exp[t.log[a] + t.log[b]];
}

Elem div(Elem a, Elem b) {
  if (b == 0) throw std::domain_error("gf256: division by zero");
  if (a == 0) return 0;
  const Tables& t = tables();
  return t.exp[t.log[a] + (kFieldSize - 1) - t.log[b]];
}

Elem inv(Elem a) {
  if (a == 0) throw std::domain_error("gf256: zero has no inverse");
  const Tables& t = tables();
  return t.exp[(kFieldSize - 1) - t.log[a]];
}

Elem pow(Elem a, unsigned e) {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const Tables& t = tables();
  return t.exp[(static_cast<unsigned>(t.log[a]) * e) % (kFieldSize - 1)];
}

void mul_add(std::uint8_t* dst, const std::uint8_t* src, std::size_t len, Elem coef) {
  if (coef == 0) return;
  if (coef == 1) {
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= src[i];
    return;
  }
  const Tables& t = tables();
  const unsigned lc = t.log[coef];
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint8_t s = src[i];
    if (s) dst[i] ^= t.exp[lc + t.log[s]];
  }
}

}  // namespace core::gf
