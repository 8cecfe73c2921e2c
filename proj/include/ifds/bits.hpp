#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ifds {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t nbits) {
  return (nbits + kWordBits - 1) / kWordBits;
}

// Word-level primitives over packed little-endian bit strings: bit i lives in
// word i / 64 at position i % 64. Reads past the end of a span yield zeros.
namespace bits {

inline bool test(std::span<const Word> s, std::size_t i) {
  return (s[i / kWordBits] >> (i % kWordBits)) & 1u;
}

inline void set(std::span<Word> s, std::size_t i) {
  s[i / kWordBits] |= Word{1} << (i % kWordBits);
}

inline Word low_mask(std::size_t n) {
  return n >= kWordBits ? ~Word{0} : (Word{1} << n) - 1;
}

/// 64 bits of `s` starting at bit `offset`.
inline Word load(std::span<const Word> s, std::size_t offset) {
  const std::size_t w = offset / kWordBits;
  const std::size_t b = offset % kWordBits;
  if (w >= s.size()) return 0;
  Word lo = s[w] >> b;
  if (b != 0 && w + 1 < s.size()) lo |= s[w + 1] << (kWordBits - b);
  return lo;
}

/// dst[dst_offset .. dst_offset+len) |= src[src_offset .. src_offset+len)
void or_shifted(std::span<Word> dst, std::size_t dst_offset,
                std::span<const Word> src, std::size_t src_offset,
                std::size_t len);

/// Same as or_shifted, but every destination word is updated with an atomic
/// fetch_or so that several threads may target one string.
void or_shifted_atomic(std::span<Word> dst, std::size_t dst_offset,
                       std::span<const Word> src, std::size_t src_offset,
                       std::size_t len);

/// True iff a[a_off..a_off+len) AND b[b_off..b_off+len) is nonzero.
bool intersects(std::span<const Word> a, std::size_t a_off,
                std::span<const Word> b, std::size_t b_off, std::size_t len);

bool any(std::span<const Word> s, std::size_t offset, std::size_t len);

std::size_t count(std::span<const Word> s);

}  // namespace bits

/// Fixed-length packed bit string.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits) : words_(words_for(nbits), 0), size_(nbits) {}

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const { return bits::test(words_, i); }
  void set(std::size_t i) { bits::set(words_, i); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

  bool any() const;
  std::size_t count() const { return bits::count(words_); }

  BitString& operator|=(const BitString& other);
  BitString& operator&=(const BitString& other);
  bool operator==(const BitString& other) const = default;

  std::span<Word> words() { return words_; }
  std::span<const Word> words() const { return words_; }

  template <typename F>
  void for_each_set(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word x = words_[w];
      while (x) {
        const int b = std::countr_zero(x);
        fn(w * kWordBits + static_cast<std::size_t>(b));
        x &= x - 1;
      }
    }
  }

  std::vector<std::size_t> set_bits() const;

  /// Hex digits, least significant nibble first: digit k holds bits 4k..4k+3.
  std::string to_hex() const;
  static BitString from_hex(std::string_view hex, std::size_t nbits);

 private:
  std::vector<Word> words_;
  std::size_t size_ = 0;
};

/// Dense boolean matrix with packed rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * stride_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool test(std::size_t r, std::size_t c) const { return bits::test(row(r), c); }
  void set(std::size_t r, std::size_t c) { bits::set(row(r), c); }

  std::span<Word> row(std::size_t r) { return {words_.data() + r * stride_, stride_}; }
  std::span<const Word> row(std::size_t r) const { return {words_.data() + r * stride_, stride_}; }

  void or_row(std::size_t dst, std::span<const Word> src);
  bool row_any(std::size_t r) const;

  /// Reflexive-transitive closure in place (rows() must equal cols()).
  void close_reflexive_transitive();

  bool operator==(const BitMatrix& other) const = default;

  std::span<const Word> data() const { return words_; }
  std::span<Word> data() { return words_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> words_;
};

}  // namespace ifds
