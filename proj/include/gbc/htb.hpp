#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gbc {

// Hierarchical truncated bitmap. A sorted id set is stored as pairs
// (idx, val): word ordinal idx covers ids [32*idx, 32*idx + 31] and bit j of
// val marks id 32*idx + j. Zero words are never stored.
inline constexpr unsigned kHtbWordBits = 32;

struct HtbSlice {
  std::span<const std::uint32_t> idx;
  std::span<const std::uint32_t> val;

  std::size_t words() const noexcept { return idx.size(); }
  bool empty() const noexcept { return idx.empty(); }
  std::size_t cardinality() const noexcept;
  std::vector<std::uint32_t> decode() const;

  // Calls fn(id) for every member in increasing order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const std::uint32_t base = idx[t] * kHtbWordBits;
      for (std::uint32_t bits = val[t]; bits != 0; bits &= bits - 1) {
        fn(base + static_cast<std::uint32_t>(__builtin_ctz(bits)));
      }
    }
  }
};

// Caller-owned output space for an intersection.
struct HtbBuffer {
  std::span<std::uint32_t> idx;
  std::span<std::uint32_t> val;

  std::size_t capacity() const noexcept { return idx.size() < val.size() ? idx.size() : val.size(); }
};

// Off/Idx/Val encoding of a family of sets; set s occupies
// [off[s], off[s + 1]) of idx and val.
class Htb {
 public:
  Htb() = default;

  std::size_t set_count() const noexcept { return off_.size() - 1; }
  std::size_t word_count() const noexcept { return idx_.size(); }

  HtbSlice slice(std::size_t set) const {
    const std::size_t b = off_[set];
    const std::size_t n = off_[set + 1] - b;
    return {{idx_.data() + b, n}, {val_.data() + b, n}};
  }

  const std::vector<std::uint32_t>& off() const noexcept { return off_; }
  const std::vector<std::uint32_t>& idx() const noexcept { return idx_; }
  const std::vector<std::uint32_t>& val() const noexcept { return val_; }

  friend bool operator==(const Htb&, const Htb&) = default;

 private:
  friend class HtbBuilder;
  friend Htb read_htb(std::istream& in);

  std::vector<std::uint32_t> off_{0};
  std::vector<std::uint32_t> idx_;
  std::vector<std::uint32_t> val_;
};

// Appends sets one at a time.
class HtbBuilder {
 public:
  // Throws ValidationError unless `ids` is strictly increasing.
  void add_set(std::span<const std::uint32_t> ids);
  Htb finish() { return std::move(htb_); }

 private:
  Htb htb_;
};

Htb htb_build(std::span<const std::vector<std::uint32_t>> sets);

// Throws ValidationError for an out-of-range set index.
std::vector<std::uint32_t> htb_decode(const Htb& h, std::size_t set_index);

// Writes a ∩ b into `out` and returns the written prefix. Aligns the shorter
// idx against the longer by binary search, then ANDs matched words. Throws
// ValidationError when out.capacity() < min(a.words(), b.words()).
HtbSlice htb_intersect(HtbSlice a, HtbSlice b, HtbBuffer out);

// |a ∩ b|. With `early_exit_at`, may stop as soon as the running count
// reaches that threshold and return a value >= it.
std::size_t htb_intersect_count(HtbSlice a, HtbSlice b,
                                std::optional<std::size_t> early_exit_at = std::nullopt);

// Little-endian dump: 8-byte magic, set count, word count, then off, idx, val
// as 32-bit words.
void write_htb(std::ostream& out, const Htb& h);
Htb read_htb(std::istream& in);

}  // namespace gbc
