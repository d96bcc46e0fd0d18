#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwc/common.hpp"

namespace cwc {

// Packed bit string, LSB-first within bytes. Used for literal payload mode.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(Bits n) : n_(n), bytes_((n + 7) / 8, 0) {}

  Bits size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(Bits i) const { return (bytes_[i >> 3] >> (i & 7)) & 1; }
  void set(Bits i, bool v) {
    std::uint8_t m = static_cast<std::uint8_t>(1u << (i & 7));
    if (v)
      bytes_[i >> 3] |= m;
    else
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~m);
  }

  void copy_range(const BitVec& src, Bits src_off, Bits dst_off, Bits len) {
    for (Bits i = 0; i < len; ++i) set(dst_off + i, src.get(src_off + i));
  }

  BitVec slice(Bits off, Bits len) const {
    BitVec out(len);
    out.copy_range(*this, off, 0, len);
    return out;
  }

  // interprets bits [off, off+width) as an LSB-first unsigned integer
  std::uint64_t read_uint(Bits off, int width) const {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      if (get(off + i)) v |= (1ull << i);
    return v;
  }
  void write_uint(Bits off, int width, std::uint64_t v) {
    for (int i = 0; i < width; ++i) set(off + i, (v >> i) & 1);
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && bytes_ == o.bytes_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s;
    s.reserve(static_cast<size_t>(n_));
    for (Bits i = 0; i < n_; ++i) s.push_back(get(i) ? '1' : '0');
    return s;
  }

  static BitVec random(Bits n, Rng& rng) {
    BitVec v(n);
    for (Bits i = 0; i < n; ++i) v.set(i, rng.below(2) == 1);
    return v;
  }

 private:
  Bits n_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace cwc
