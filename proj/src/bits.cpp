#include "ifds/bits.hpp"

#include <atomic>
#include <stdexcept>

namespace ifds {
namespace bits {

void or_shifted(std::span<Word> dst, std::size_t dst_offset,
                std::span<const Word> src, std::size_t src_offset,
                std::size_t len) {
  if (dst_offset % kWordBits == 0 && src_offset % kWordBits == 0) {
    Word* d = dst.data() + dst_offset / kWordBits;
    const Word* s = src.data() + src_offset / kWordBits;
    const std::size_t full = len / kWordBits;
    for (std::size_t i = 0; i < full; ++i) d[i] |= s[i];
    const std::size_t rest = len % kWordBits;
    if (rest) d[full] |= s[full] & low_mask(rest);
    return;
  }
  while (len > 0) {
    const std::size_t dw = dst_offset / kWordBits;
    const std::size_t db = dst_offset % kWordBits;
    const std::size_t take = std::min(kWordBits - db, len);
    const Word chunk = load(src, src_offset) & low_mask(take);
    dst[dw] |= chunk << db;
    dst_offset += take;
    src_offset += take;
    len -= take;
  }
}

void or_shifted_atomic(std::span<Word> dst, std::size_t dst_offset,
                       std::span<const Word> src, std::size_t src_offset,
                       std::size_t len) {
  while (len > 0) {
    const std::size_t dw = dst_offset / kWordBits;
    const std::size_t db = dst_offset % kWordBits;
    const std::size_t take = std::min(kWordBits - db, len);
    const Word chunk = (load(src, src_offset) & low_mask(take)) << db;
    if (chunk) std::atomic_ref<Word>(dst[dw]).fetch_or(chunk, std::memory_order_relaxed);
    dst_offset += take;
    src_offset += take;
    len -= take;
  }
}

bool intersects(std::span<const Word> a, std::size_t a_off,
                std::span<const Word> b, std::size_t b_off, std::size_t len) {
  while (len > 0) {
    const std::size_t take = std::min(kWordBits, len);
    if (load(a, a_off) & load(b, b_off) & low_mask(take)) return true;
    a_off += take;
    b_off += take;
    len -= take;
  }
  return false;
}

bool any(std::span<const Word> s, std::size_t offset, std::size_t len) {
  while (len > 0) {
    const std::size_t take = std::min(kWordBits, len);
    if (load(s, offset) & low_mask(take)) return true;
    offset += take;
    len -= take;
  }
  return false;
}

std::size_t count(std::span<const Word> s) {
  std::size_t n = 0;
  for (Word w : s) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

}  // namespace bits

bool BitString::any() const {
  for (Word w : words_)
    if (w) return true;
  return false;
}

BitString& BitString::operator|=(const BitString& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitString size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitString& BitString::operator&=(const BitString& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitString size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

std::vector<std::size_t> BitString::set_bits() const {
  std::vector<std::size_t> out;
  for_each_set([&](std::size_t i) { out.push_back(i); });
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((size_ + 3) / 4);
  for (std::size_t i = 0; i < size_; i += 4) {
    const Word nibble = bits::load(words_, i) & bits::low_mask(std::min<std::size_t>(4, size_ - i));
    out.push_back(kDigits[nibble]);
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t nbits) {
  if (hex.size() != (nbits + 3) / 4) throw std::invalid_argument("hex length does not match bit count");
  BitString out(nbits);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char c = hex[k];
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
    else throw std::invalid_argument("invalid hex digit");
    for (unsigned b = 0; b < 4; ++b) {
      if (!(v >> b & 1u)) continue;
      const std::size_t i = 4 * k + b;
      if (i >= nbits) throw std::invalid_argument("hex sets a bit past the end");
      out.set(i);
    }
  }
  return out;
}

void BitMatrix::or_row(std::size_t dst, std::span<const Word> src) {
  auto d = row(dst);
  for (std::size_t i = 0; i < stride_; ++i) d[i] |= src[i];
}

bool BitMatrix::row_any(std::size_t r) const {
  for (Word w : row(r))
    if (w) return true;
  return false;
}

void BitMatrix::close_reflexive_transitive() {
  if (rows_ != cols_) throw std::invalid_argument("closure needs a square matrix");
  for (std::size_t i = 0; i < rows_; ++i) set(i, i);
  // Warshall: after step k every row reaching k also reaches everything k reaches.
  for (std::size_t k = 0; k < rows_; ++k) {
    const auto rk = row(k);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == k || !test(i, k)) continue;
      auto ri = row(i);
      for (std::size_t w = 0; w < stride_; ++w) ri[w] |= rk[w];
    }
  }
}

}  // namespace ifds
