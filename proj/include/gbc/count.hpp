#pragma once

#include <cstdint>
#include <string>

namespace gbc {

// Biclique counts grow combinatorially, so all accumulation is 128-bit.
using Count = unsigned __int128;

inline constexpr Count kCountMax = ~Count{0};

std::string to_string(Count value);

// Adds `x` into `acc`, saturating at kCountMax. Returns false on overflow.
inline bool checked_add(Count& acc, Count x) {
  Count sum;
  if (__builtin_add_overflow(acc, x, &sum)) {
    acc = kCountMax;
    return false;
  }
  acc = sum;
  return true;
}

// C(n, k), saturating at kCountMax; `overflow` is set when saturation occurred.
Count binomial(std::uint64_t n, std::uint64_t k, bool* overflow = nullptr);

}  // namespace gbc
