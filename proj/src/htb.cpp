#include "gbc/htb.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "gbc/error.hpp"

namespace gbc {

std::size_t HtbSlice::cardinality() const noexcept {
  std::size_t n = 0;
  for (std::uint32_t w : val) n += static_cast<std::size_t>(__builtin_popcount(w));
  return n;
}

std::vector<std::uint32_t> HtbSlice::decode() const {
  std::vector<std::uint32_t> ids;
  ids.reserve(cardinality());
  for_each([&](std::uint32_t id) { ids.push_back(id); });
  return ids;
}

void HtbBuilder::add_set(std::span<const std::uint32_t> ids) {
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] <= ids[i - 1]) {
      throw ValidationError("htb", "set " + std::to_string(htb_.set_count()) +
                                       " is not strictly increasing at position " +
                                       std::to_string(i));
    }
  }
  for (std::uint32_t id : ids) {
    const std::uint32_t word = id / kHtbWordBits;
    const std::uint32_t bit = 1u << (id % kHtbWordBits);
    if (htb_.idx_.size() > htb_.off_.back() && htb_.idx_.back() == word) {
      htb_.val_.back() |= bit;
    } else {
      htb_.idx_.push_back(word);
      htb_.val_.push_back(bit);
    }
  }
  if (htb_.idx_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("htb", "encoding exceeds 2^32 words");
  }
  htb_.off_.push_back(static_cast<std::uint32_t>(htb_.idx_.size()));
}

Htb htb_build(std::span<const std::vector<std::uint32_t>> sets) {
  HtbBuilder builder;
  for (const auto& s : sets) builder.add_set(s);
  return builder.finish();
}

std::vector<std::uint32_t> htb_decode(const Htb& h, std::size_t set_index) {
  if (set_index >= h.set_count()) {
    throw ValidationError("htb", "set index " + std::to_string(set_index) + " out of range (" +
                                     std::to_string(h.set_count()) + " sets)");
  }
  return h.slice(set_index).decode();
}

HtbSlice htb_intersect(HtbSlice a, HtbSlice b, HtbBuffer out) {
  if (a.words() > b.words()) std::swap(a, b);
  if (out.capacity() < a.words()) {
    throw ValidationError("htb", "output capacity " + std::to_string(out.capacity()) +
                                     " below required " + std::to_string(a.words()));
  }
  std::size_t n = 0;
  auto lo = b.idx.begin();
  for (std::size_t t = 0; t < a.words() && lo != b.idx.end(); ++t) {
    lo = std::lower_bound(lo, b.idx.end(), a.idx[t]);
    if (lo == b.idx.end() || *lo != a.idx[t]) continue;
    const std::uint32_t bits = a.val[t] & b.val[static_cast<std::size_t>(lo - b.idx.begin())];
    if (bits != 0) {
      out.idx[n] = a.idx[t];
      out.val[n] = bits;
      ++n;
    }
    ++lo;
  }
  return {{out.idx.data(), n}, {out.val.data(), n}};
}

std::size_t htb_intersect_count(HtbSlice a, HtbSlice b, std::optional<std::size_t> early_exit_at) {
  if (a.words() > b.words()) std::swap(a, b);
  const std::size_t stop = early_exit_at.value_or(std::numeric_limits<std::size_t>::max());
  std::size_t count = 0;
  auto lo = b.idx.begin();
  for (std::size_t t = 0; t < a.words() && lo != b.idx.end(); ++t) {
    lo = std::lower_bound(lo, b.idx.end(), a.idx[t]);
    if (lo == b.idx.end() || *lo != a.idx[t]) continue;
    count += static_cast<std::size_t>(
        __builtin_popcount(a.val[t] & b.val[static_cast<std::size_t>(lo - b.idx.begin())]));
    if (count >= stop) return count;
    ++lo;
  }
  return count;
}

namespace {

constexpr std::array<char, 8> kMagic{'G', 'B', 'C', 'H', 'T', 'B', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t x) {
  const char bytes[4] = {static_cast<char>(x & 0xFF), static_cast<char>((x >> 8) & 0xFF),
                         static_cast<char>((x >> 16) & 0xFF), static_cast<char>((x >> 24) & 0xFF)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw ValidationError("htb", "truncated dump");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void write_htb(std::ostream& out, const Htb& h) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(h.set_count()));
  put_u32(out, static_cast<std::uint32_t>(h.word_count()));
  for (std::uint32_t x : h.off()) put_u32(out, x);
  for (std::uint32_t x : h.idx()) put_u32(out, x);
  for (std::uint32_t x : h.val()) put_u32(out, x);
}

Htb read_htb(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ValidationError("htb", "bad magic in dump");
  }
  const std::uint32_t sets = get_u32(in);
  const std::uint32_t words = get_u32(in);
  Htb h;
  h.off_.resize(static_cast<std::size_t>(sets) + 1);
  for (auto& x : h.off_) x = get_u32(in);
  h.idx_.resize(words);
  for (auto& x : h.idx_) x = get_u32(in);
  h.val_.resize(words);
  for (auto& x : h.val_) x = get_u32(in);
  if (h.off_.front() != 0 || h.off_.back() != words ||
      !std::is_sorted(h.off_.begin(), h.off_.end())) {
    throw ValidationError("htb", "inconsistent offsets in dump");
  }
  return h;
}

}  // namespace gbc
