#include "gbc/count.hpp"

#include <algorithm>
#include <numeric>

namespace gbc {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Count binomial(std::uint64_t n, std::uint64_t k, bool* overflow) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Count result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // result * (n - i) is divisible by (i + 1); split the divisor first so
    // the product only overflows when the true value does.
    const std::uint64_t g = std::gcd(n - i, i + 1);
    const Count factor = (n - i) / g;
    result /= (i + 1) / g;
    Count next;
    if (__builtin_mul_overflow(result, factor, &next)) {
      if (overflow) *overflow = true;
      return kCountMax;
    }
    result = next;
  }
  return result;
}

}  // namespace gbc
