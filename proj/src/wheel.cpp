#include "cwc/wheel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cwc {

IntervalStats compute_cloud_interval(const Topology& t, int node, Bits s, Direction dir) {
  require(t.mode() == Mode::Wheel, Errc::BadArgument, "cloud intervals need a wheel");
  require(s >= 1, Errc::BadArgument, "s must be >= 1");
  const int n = t.n();
  auto pos = [&](int j) {
    return dir == Direction::Clockwise ? (node + j) % n : ((node - j) % n + n) % n;
  };

  IntervalStats st;
  st.origin = node;
  st.dir = dir;
  st.s = s;
  st.k_C = n;
  st.k_L = n;

  Bits cum = 0;
  for (int k = 0; k < n; ++k) {
    cum += t.cloud_bw(pos(k));
    if (st.k_C == n && (static_cast<Bits>(k) + 1) * cum >= s) st.k_C = k;
    if (st.k_L == n && n >= 2) {
      Bits w = t.local_bw(pos(k), pos(k + 1));
      if (w < cum) st.k_L = k;
    }
  }
  st.k = std::min(st.k_C, st.k_L);

  int size = std::min(st.k, n - 1) + 1;
  st.nodes.reserve(static_cast<size_t>(size));
  for (int j = 0; j < size; ++j) st.nodes.push_back(pos(j));

  st.bc_I = 0;
  for (int v : st.nodes) st.bc_I += t.cloud_bw(v);
  if (size >= 2) {
    Bits mn = std::numeric_limits<Bits>::max();
    for (int j = 0; j + 1 < size; ++j) mn = std::min(mn, t.local_bw(st.nodes[j], st.nodes[j + 1]));
    st.phi = mn;
  }

  if (st.k == n && st.bc_I == 0)
    fail(Errc::ZeroCloudBandwidthEverywhere, "no cloud bandwidth anywhere on the ring");

  double z = static_cast<double>(size);
  if (st.phi) {
    if (*st.phi == 0)
      z = std::numeric_limits<double>::infinity();
    else
      z += static_cast<double>(s) / static_cast<double>(*st.phi);
  }
  if (st.bc_I == 0)
    z = std::numeric_limits<double>::infinity();
  else
    z += static_cast<double>(s) / static_cast<double>(st.bc_I);
  st.timespan = z;
  return st;
}

IntervalStats best_cloud_interval(const Topology& t, int node, Bits s) {
  IntervalStats cw = compute_cloud_interval(t, node, s, Direction::Clockwise);
  if (t.n() == 1) return cw;
  IntervalStats ccw = compute_cloud_interval(t, node, s, Direction::Counterclockwise);
  return (ccw.timespan < cw.timespan) ? ccw : cw;  // tie: clockwise
}

Bits wheel_lower_bound(const Topology& t, int node, Bits s, Direction dir) {
  IntervalStats st = compute_cloud_interval(t, node, s, dir);
  Bits lb = st.k;
  if (st.phi && *st.phi > 0) lb = std::max(lb, ceil_div(s, 2 * *st.phi));
  if (st.phi && *st.phi == 0) return std::numeric_limits<Bits>::max() / 4;
  if (st.bc_I > 0)
    lb = std::max(lb, ceil_div(s, 2 * st.bc_I));
  else
    return std::numeric_limits<Bits>::max() / 4;
  return lb;
}

Bits wheel_lower_bound_two_sided(const Topology& t, int node, Bits s) {
  Bits cw = wheel_lower_bound(t, node, s, Direction::Clockwise);
  if (t.n() == 1) return cw;
  return std::min(cw, wheel_lower_bound(t, node, s, Direction::Counterclockwise));
}

}  // namespace cwc
