#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sopt {

/// Natural numbers are 64-bit with checked arithmetic. Doubly exponential
/// values show up quickly, so every operation that can wrap throws instead.
using Natural = std::uint64_t;

class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

inline Natural add(Natural a, Natural b) {
  Natural r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("natural addition overflow");
  return r;
}

inline Natural mul(Natural a, Natural b) {
  Natural r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("natural multiplication overflow");
  return r;
}

inline Natural pow(Natural base, std::uint32_t exp) {
  Natural r = 1;
  while (exp != 0) {
    if (exp & 1U) r = mul(r, base);
    exp >>= 1U;
    if (exp != 0) base = mul(base, base);
  }
  return r;
}

/// 2^k, checked.
inline Natural pow2(Natural k) {
  if (k >= 64) throw OverflowError("2^k overflow");
  return Natural{1} << k;
}

/// Saturating arithmetic for upper-bound checks: a bound that does not fit
/// in 64 bits is larger than any step count we can observe.
inline constexpr Natural kSaturated = std::numeric_limits<Natural>::max();

inline Natural sat_add(Natural a, Natural b) {
  Natural r;
  return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

inline Natural sat_mul(Natural a, Natural b) {
  Natural r;
  return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

inline Natural sat_pow(Natural base, std::uint32_t exp) {
  Natural r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    r = sat_mul(r, base);
    if (r == kSaturated || r == 0) break;
  }
  return r;
}

}  // namespace sopt
