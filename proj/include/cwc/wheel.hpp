#pragma once

#include <optional>
#include <vector>

#include "cwc/topology.hpp"

namespace cwc {

enum class Direction { Clockwise, Counterclockwise };

inline const char* direction_name(Direction d) {
  return d == Direction::Clockwise ? "cw" : "ccw";
}

// A node's cloud interval for s bits in one direction, with its parameters.
// k_C, k_L and k are lengths; k == n encodes "no k < n satisfies the
// inequality", in which case the interval is the whole ring.
struct IntervalStats {
  int origin = 0;
  Direction dir = Direction::Clockwise;
  Bits s = 0;
  int k_C = 0, k_L = 0, k = 0;
  std::vector<int> nodes;          // members, origin first, ring-adjacent order
  std::optional<Bits> phi;         // bottleneck bandwidth; nullopt = infinite (|I| = 1)
  Bits bc_I = 0;                   // cloud bandwidth of the interval
  double timespan = 0.0;           // Z = |I| + s/phi + s/bc(I)

  int size() const { return static_cast<int>(nodes.size()); }
  bool whole_ring(int n) const { return size() == n; }
};

// Def. of the cloud interval: scans k upward and applies the two minimality
// conditions. Throws ZeroCloudBandwidthEverywhere when the whole ring has no
// cloud bandwidth at all (CloudWrite infeasible).
IntervalStats compute_cloud_interval(const Topology& t, int node, Bits s, Direction dir);

// both directions computed, the smaller-timespan one returned (tie: clockwise)
IntervalStats best_cloud_interval(const Topology& t, int node, Bits s);

// constant-explicit lower bound for CloudWrite_i restricted to one side:
// max(k(i), ceil(s / 2 phi), ceil(s / 2 bc(I)))
Bits wheel_lower_bound(const Topology& t, int node, Bits s, Direction dir);
// min over the two directions (lower bound for algorithms free to use both)
Bits wheel_lower_bound_two_sided(const Topology& t, int node, Bits s);

}  // namespace cwc
