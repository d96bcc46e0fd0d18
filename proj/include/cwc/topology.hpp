#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwc/common.hpp"

namespace cwc {

enum class Mode { Wheel, FatLinks, General };

std::string mode_name(Mode m);

// One CWC system: n processing nodes, one passive cloud node, local links with
// per-direction bandwidth and one cloud link per node. All bandwidths are in
// bits per round.
class Topology {
 public:
  struct LocalLink {
    int u, v;        // u < v
    Bits w_uv, w_vu; // bandwidth per direction
  };

  static Topology wheel(int n, std::vector<Bits> cloud_bw, std::vector<Bits> ring_bw);
  static Topology uniform_wheel(int n, Bits b_c, Bits b_l);
  static Topology fat_links(int n, Bits s, std::vector<Bits> cloud_bw,
                            std::vector<LocalLink> links);
  static Topology general(int n, std::vector<Bits> cloud_bw, std::vector<LocalLink> links);

  // JSON document {mode, n, s?, cloud_bw, local_bw}; see README for the schema.
  static Topology from_json(const std::string& text);
  std::string to_json() const;

  Mode mode() const { return mode_; }
  int n() const { return n_; }
  Bits fat_s() const { return fat_s_; }

  Bits cloud_bw(int i) const { return cloud_bw_[i]; }
  const std::vector<Bits>& cloud_bws() const { return cloud_bw_; }

  // 0 when no link
  Bits local_bw(int u, int v) const;
  const std::vector<LocalLink>& local_links() const { return links_; }
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }

  // wheel helpers: bandwidth of ring link (i, i+1 mod n)
  Bits ring_bw(int i) const;

  // sum of local bandwidth leaving node set `in` (in[u] true for members)
  // plus, when `with_cloud`, the cloud bandwidth of the members.
  Bits cut_capacity(const std::vector<bool>& in, bool with_cloud = true) const;

  // hop distances on the local graph from src (-1 = unreachable)
  std::vector<int> hop_distances(int src) const;
  int local_diameter() const;  // max finite pairwise hop distance

 private:
  Topology() = default;
  void index_links();
  void validate() const;

  Mode mode_ = Mode::General;
  int n_ = 0;
  Bits fat_s_ = 0;
  std::vector<Bits> cloud_bw_;
  std::vector<LocalLink> links_;
  std::vector<std::vector<int>> adj_;           // node -> link indices
  std::map<std::pair<int, int>, int> link_at_;  // (min,max) -> link index
};

}  // namespace cwc
