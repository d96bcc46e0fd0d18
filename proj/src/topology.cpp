#include "cwc/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "json.hpp"

namespace cwc {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Wheel: return "wheel";
    case Mode::FatLinks: return "fat-links";
    case Mode::General: return "general";
  }
  return "?";
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonIntegerBandwidth: return "NonIntegerBandwidth";
    case Errc::FatLinkTooThin: return "FatLinkTooThin";
    case Errc::BrokenRing: return "BrokenRing";
    case Errc::CausalityViolation: return "CausalityViolation";
    case Errc::OverlappingCloudWrite: return "OverlappingCloudWrite";
    case Errc::BandwidthExceeded: return "BandwidthExceeded";
    case Errc::ReadWriteSameRound: return "ReadWriteSameRound";
    case Errc::ReadMissingData: return "ReadMissingData";
    case Errc::ZeroCloudBandwidthEverywhere: return "ZeroCloudBandwidthEverywhere";
    case Errc::ColoringImpossible: return "ColoringImpossible";
    case Errc::GrainTooWide: return "GrainTooWide";
    case Errc::FileMissing: return "FileMissing";
    case Errc::Unreachable: return "Unreachable";
    case Errc::InvalidKappa: return "InvalidKappa";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::PlanInvalid: return "PlanInvalid";
    case Errc::BadTopology: return "BadTopology";
    case Errc::BadArgument: return "BadArgument";
  }
  return "?";
}

Topology Topology::wheel(int n, std::vector<Bits> cloud_bw, std::vector<Bits> ring_bw) {
  Topology t;
  t.mode_ = Mode::Wheel;
  t.n_ = n;
  t.cloud_bw_ = std::move(cloud_bw);
  require(n >= 1, Errc::BadTopology, "wheel needs n >= 1");
  require(static_cast<int>(t.cloud_bw_.size()) == n, Errc::BadTopology,
          "cloud_bw size mismatch");
  if (n >= 2) {
    require(static_cast<int>(ring_bw.size()) == (n == 2 ? 1 : n), Errc::BrokenRing,
            "ring needs one bandwidth per cycle link");
    int m = (n == 2) ? 1 : n;
    for (int i = 0; i < m; ++i) {
      int u = i, v = (i + 1) % n;
      t.links_.push_back({std::min(u, v), std::max(u, v), ring_bw[i], ring_bw[i]});
    }
  }
  t.index_links();
  t.validate();
  return t;
}

Topology Topology::uniform_wheel(int n, Bits b_c, Bits b_l) {
  std::vector<Bits> cb(n, b_c);
  std::vector<Bits> rb(n == 2 ? 1 : n, b_l);
  if (n == 1) rb.clear();
  return wheel(n, cb, rb);
}

Topology Topology::fat_links(int n, Bits s, std::vector<Bits> cloud_bw,
                             std::vector<LocalLink> links) {
  Topology t;
  t.mode_ = Mode::FatLinks;
  t.n_ = n;
  t.fat_s_ = s;
  t.cloud_bw_ = std::move(cloud_bw);
  t.links_ = std::move(links);
  for (auto& l : t.links_) {
    if (l.u > l.v) {
      std::swap(l.u, l.v);
      std::swap(l.w_uv, l.w_vu);
    }
    require(l.w_uv == l.w_vu, Errc::BadTopology, "fat links must be symmetric");
    require(l.w_uv >= s, Errc::FatLinkTooThin,
            "local link (" + std::to_string(l.u) + "," + std::to_string(l.v) +
                ") has bandwidth " + std::to_string(l.w_uv) + " < s = " + std::to_string(s));
  }
  t.index_links();
  t.validate();
  return t;
}

Topology Topology::general(int n, std::vector<Bits> cloud_bw, std::vector<LocalLink> links) {
  Topology t;
  t.mode_ = Mode::General;
  t.n_ = n;
  t.cloud_bw_ = std::move(cloud_bw);
  t.links_ = std::move(links);
  for (auto& l : t.links_) {
    if (l.u > l.v) {
      std::swap(l.u, l.v);
      std::swap(l.w_uv, l.w_vu);
    }
  }
  t.index_links();
  t.validate();
  return t;
}

void Topology::index_links() {
  adj_.assign(n_, {});
  link_at_.clear();
  for (int k = 0; k < static_cast<int>(links_.size()); ++k) {
    const auto& l = links_[k];
    require(l.u != l.v, Errc::BadTopology, "self-loop local link");
    require(0 <= l.u && l.v < n_, Errc::BadTopology, "link endpoint out of range");
    require(!link_at_.count({l.u, l.v}), Errc::BadTopology, "duplicate local link");
    link_at_[{l.u, l.v}] = k;
    adj_[l.u].push_back(k);
    adj_[l.v].push_back(k);
  }
}

void Topology::validate() const {
  for (Bits b : cloud_bw_)
    require(b >= 0, Errc::NonIntegerBandwidth, "negative cloud bandwidth");
  for (const auto& l : links_) {
    require(l.w_uv >= 0 && l.w_vu >= 0, Errc::NonIntegerBandwidth,
            "negative local bandwidth");
  }
  if (mode_ == Mode::Wheel && n_ >= 2) {
    int expect = (n_ == 2) ? 1 : n_;
    require(static_cast<int>(links_.size()) == expect, Errc::BrokenRing,
            "wheel must be exactly the cycle");
    for (int i = 0; i < n_; ++i) {
      int u = i, v = (i + 1) % n_;
      if (u == v) continue;
      require(link_at_.count({std::min(u, v), std::max(u, v)}) > 0, Errc::BrokenRing,
              "missing ring link (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
  }
}

Bits Topology::local_bw(int u, int v) const {
  auto it = link_at_.find({std::min(u, v), std::max(u, v)});
  if (it == link_at_.end()) return 0;
  const auto& l = links_[it->second];
  return (u == l.u) ? l.w_uv : l.w_vu;
}

Bits Topology::ring_bw(int i) const {
  require(mode_ == Mode::Wheel, Errc::BadArgument, "ring_bw on non-wheel");
  return local_bw(i, (i + 1) % n_);
}

Bits Topology::cut_capacity(const std::vector<bool>& in, bool with_cloud) const {
  Bits cap = 0;
  for (const auto& l : links_) {
    if (in[l.u] && !in[l.v]) cap += l.w_uv;
    if (in[l.v] && !in[l.u]) cap += l.w_vu;
  }
  if (with_cloud)
    for (int i = 0; i < n_; ++i)
      if (in[i]) cap += cloud_bw_[i];
  return cap;
}

std::vector<int> Topology::hop_distances(int src) const {
  std::vector<int> d(n_, -1);
  std::deque<int> q;
  d[src] = 0;
  q.push_back(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int k : adj_[u]) {
      int v = links_[k].u == u ? links_[k].v : links_[k].u;
      if (d[v] == -1) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

int Topology::local_diameter() const {
  int diam = 0;
  for (int i = 0; i < n_; ++i) {
    auto d = hop_distances(i);
    for (int v = 0; v < n_; ++v) diam = std::max(diam, d[v]);
  }
  return diam;
}

namespace {

std::vector<Bits> bw_list(const nlohmann::json& j, int count, const char* what) {
  std::vector<Bits> out;
  if (j.is_number()) {
    require(j.is_number_integer(), Errc::NonIntegerBandwidth,
            std::string(what) + " must be integral");
    out.assign(count, j.get<Bits>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      require(e.is_number_integer(), Errc::NonIntegerBandwidth,
              std::string(what) + " entries must be integral");
      out.push_back(e.get<Bits>());
    }
  } else {
    fail(Errc::BadTopology, std::string(what) + " must be a number or array");
  }
  return out;
}

}  // namespace

Topology Topology::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::string mode = j.at("mode").get<std::string>();
  int n = j.at("n").get<int>();
  require(n >= 1, Errc::BadTopology, "n must be >= 1");
  auto cloud = bw_list(j.at("cloud_bw"), n, "cloud_bw");
  require(static_cast<int>(cloud.size()) == n, Errc::BadTopology, "cloud_bw size mismatch");

  if (mode == "wheel") {
    int m = (n >= 3) ? n : (n == 2 ? 1 : 0);
    std::vector<Bits> ring = j.count("local_bw") ? bw_list(j["local_bw"], m, "local_bw")
                                                 : std::vector<Bits>(m, 0);
    require(static_cast<int>(ring.size()) == m, Errc::BrokenRing, "local_bw size mismatch");
    return wheel(n, cloud, ring);
  }

  std::vector<LocalLink> links;
  if (j.count("local_bw") && j["local_bw"].is_array() && !j["local_bw"].empty() &&
      j["local_bw"][0].is_object()) {
    for (const auto& e : j["local_bw"]) {
      LocalLink l;
      l.u = e.at("u").get<int>();
      l.v = e.at("v").get<int>();
      if (e.count("w")) {
        require(e["w"].is_number_integer(), Errc::NonIntegerBandwidth, "w must be integral");
        l.w_uv = l.w_vu = e["w"].get<Bits>();
      } else {
        l.w_uv = e.at("w_uv").get<Bits>();
        l.w_vu = e.at("w_vu").get<Bits>();
      }
      links.push_back(l);
    }
  } else if (j.count("local_bw")) {
    fail(Errc::BadTopology, "non-wheel local_bw must be an edge list");
  }

  if (mode == "fat-links" || mode == "fat") {
    Bits s = j.at("s").get<Bits>();
    return fat_links(n, s, cloud, links);
  }
  if (mode == "general") return general(n, cloud, links);
  fail(Errc::BadTopology, "unknown mode '" + mode + "'");
}

std::string Topology::to_json() const {
  nlohmann::json j;
  j["mode"] = mode_name(mode_);
  j["n"] = n_;
  if (mode_ == Mode::FatLinks) j["s"] = fat_s_;
  j["cloud_bw"] = cloud_bw_;
  if (mode_ == Mode::Wheel) {
    std::vector<Bits> ring;
    for (int i = 0; i < static_cast<int>(links_.size()); ++i) ring.push_back(ring_bw(i));
    j["local_bw"] = ring;
  } else {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& l : links_) {
      nlohmann::json e;
      e["u"] = l.u;
      e["v"] = l.v;
      if (l.w_uv == l.w_vu)
        e["w"] = l.w_uv;
      else {
        e["w_uv"] = l.w_uv;
        e["w_vu"] = l.w_vu;
      }
      edges.push_back(e);
    }
    j["local_bw"] = edges;
  }
  return j.dump();
}

}  // namespace cwc
