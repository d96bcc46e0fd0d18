#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "cwc/common.hpp"

namespace cwc {

struct BitRange {
  Bits lo = 0, hi = 0;  // half-open [lo, hi)
  Bits len() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  bool operator==(const BitRange& o) const { return lo == o.lo && hi == o.hi; }
};

// Sorted set of disjoint half-open bit ranges.
class IntervalSet {
 public:
  void add(BitRange r) {
    if (r.empty()) return;
    auto it = spans_.begin();
    while (it != spans_.end() && it->hi < r.lo) ++it;
    while (it != spans_.end() && it->lo <= r.hi) {
      r.lo = std::min(r.lo, it->lo);
      r.hi = std::max(r.hi, it->hi);
      it = spans_.erase(it);
    }
    spans_.insert(it, r);
  }

  void add(const IntervalSet& o) {
    for (const auto& r : o.spans_) add(r);
  }

  bool contains(BitRange r) const {
    if (r.empty()) return true;
    for (const auto& s : spans_)
      if (s.lo <= r.lo && r.hi <= s.hi) return true;
    return false;
  }

  bool intersects(BitRange r) const {
    for (const auto& s : spans_)
      if (s.lo < r.hi && r.lo < s.hi) return true;
    return false;
  }

  // portion of r present in the set
  std::vector<BitRange> clip(BitRange r) const {
    std::vector<BitRange> out;
    for (const auto& s : spans_) {
      Bits lo = std::max(s.lo, r.lo), hi = std::min(s.hi, r.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
    return out;
  }

  Bits count() const {
    Bits c = 0;
    for (const auto& s : spans_) c += s.len();
    return c;
  }

  bool empty() const { return spans_.empty(); }
  const std::vector<BitRange>& spans() const { return spans_; }

  // longest prefix of [0, limit) fully present starting at 0
  Bits prefix_until(Bits limit) const {
    Bits p = 0;
    for (const auto& s : spans_) {
      if (s.lo > p) break;
      p = std::max(p, s.hi);
      if (p >= limit) return limit;
    }
    return std::min(p, limit);
  }

 private:
  std::vector<BitRange> spans_;
};

}  // namespace cwc
