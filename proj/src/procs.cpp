#include "cwc/procs.hpp"

#include <algorithm>
#include <deque>

namespace cwc {

RouteTree RouteTree::path(const std::vector<int>& nodes, int root_index) {
  RouteTree t;
  t.members = nodes;
  t.root = nodes[static_cast<size_t>(root_index)];
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    int d = std::abs(i - root_index);
    t.depth[nodes[static_cast<size_t>(i)]] = d;
    if (i < root_index) {
      t.parent[nodes[static_cast<size_t>(i)]] = nodes[static_cast<size_t>(i + 1)];
      t.children[nodes[static_cast<size_t>(i + 1)]].push_back(nodes[static_cast<size_t>(i)]);
    } else if (i > root_index) {
      t.parent[nodes[static_cast<size_t>(i)]] = nodes[static_cast<size_t>(i - 1)];
      t.children[nodes[static_cast<size_t>(i - 1)]].push_back(nodes[static_cast<size_t>(i)]);
    }
  }
  return t;
}

RouteTree RouteTree::bfs(const Topology& topo, const std::vector<int>& ball, int root) {
  RouteTree t;
  std::vector<bool> member(static_cast<size_t>(topo.n()), false);
  for (int v : ball) member[static_cast<size_t>(v)] = true;
  require(member[static_cast<size_t>(root)], Errc::BadArgument, "root outside ball");

  std::vector<int> dist(static_cast<size_t>(topo.n()), -1);
  std::deque<int> q;
  dist[static_cast<size_t>(root)] = 0;
  q.push_back(root);
  t.members.push_back(root);
  t.root = root;
  t.depth[root] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    // neighbors in ascending id for determinism
    std::vector<int> nb;
    for (int k : topo.neighbors(u)) {
      const auto& l = topo.local_links()[static_cast<size_t>(k)];
      int v = l.u == u ? l.v : l.u;
      if (member[static_cast<size_t>(v)] && dist[static_cast<size_t>(v)] == -1) nb.push_back(v);
    }
    std::sort(nb.begin(), nb.end());
    for (int v : nb) {
      dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
      t.parent[v] = u;
      t.children[u].push_back(v);
      t.depth[v] = dist[static_cast<size_t>(v)];
      t.members.push_back(v);
      q.push_back(v);
    }
  }
  require(t.members.size() == ball.size(), Errc::BadArgument, "ball is not connected");
  return t;
}

int RouteTree::height() const {
  int h = 0;
  for (const auto& [node, d] : depth) h = std::max(h, d);
  return h;
}

int run_procs(Engine& eng, const std::vector<Proc*>& procs, int max_rounds) {
  int rounds = 0;
  int idle_streak = 0;
  for (;;) {
    bool all_done = true;
    for (auto* p : procs)
      if (!p->done(eng)) {
        all_done = false;
        break;
      }
    if (all_done) break;
    Round r;
    for (auto* p : procs)
      if (!p->done(eng)) p->tick(eng, r);
    bool active = r.has_transfer();
    eng.step(r);
    ++rounds;
    idle_streak = active ? 0 : idle_streak + 1;
    require(idle_streak < 4, Errc::BadArgument, "procedure deadlock (no progress)");
    require(rounds < max_rounds, Errc::BadArgument, "procedure round limit exceeded");
  }
  return rounds;
}

std::vector<BitRange> sendable_spans(const Engine& eng, int from, int to, const Piece& piece) {
  const IntervalSet* have = eng.holdings(from, piece.obj);
  if (!have) return {};
  std::vector<BitRange> spans = have->clip(piece.range);
  const IntervalSet* there = eng.holdings(to, piece.obj);
  if (!there || there->empty()) return spans;
  std::vector<BitRange> out;
  for (const auto& sp : spans) {
    Bits lo = sp.lo;
    for (const auto& t : there->spans()) {
      if (t.hi <= lo) continue;
      if (t.lo >= sp.hi) break;
      if (t.lo > lo) out.push_back({lo, std::min(t.lo, sp.hi)});
      lo = std::max(lo, t.hi);
      if (lo >= sp.hi) break;
    }
    if (lo < sp.hi) out.push_back({lo, sp.hi});
  }
  return out;
}

Bits relay_bits(const Engine& eng, int from, int to, const std::vector<Piece>& pieces,
                Bits budget, SendAction& out) {
  Bits taken = 0;
  for (const auto& piece : pieces) {
    if (taken >= budget) break;
    for (const auto& sp : sendable_spans(eng, from, to, piece)) {
      if (taken >= budget) break;
      Bits len = std::min(sp.len(), budget - taken);
      out.items.push_back({piece.obj, {sp.lo, sp.lo + len}});
      taken += len;
    }
  }
  return taken;
}

std::vector<Bits> proportional_slices(const Topology& t, const std::vector<int>& members,
                                      Bits s, int absorber) {
  Bits total = 0;
  for (int v : members) total += t.cloud_bw(v);
  require(total > 0, Errc::Unreachable, "no cloud bandwidth in region");
  std::vector<Bits> len(members.size(), 0);
  Bits assigned = 0;
  for (size_t i = 0; i < members.size(); ++i) {
    if (static_cast<int>(i) == absorber) continue;
    len[i] = s * t.cloud_bw(members[i]) / total;
    assigned += len[i];
  }
  len[static_cast<size_t>(absorber)] = s - assigned;
  return len;
}

// ---- BroadcastProc ---------------------------------------------------------

BroadcastProc::BroadcastProc(RouteTree tree, ObjectId obj, Bits size, ActGate gate)
    : tree_(std::move(tree)), obj_(obj), size_(size), gate_(std::move(gate)) {}

void BroadcastProc::tick(Engine& eng, Round& out) {
  if (size_ == 0) return;
  for (const auto& [p, kids] : tree_.children) {
    if (!gate_(p)) continue;
    const IntervalSet* hp = eng.holdings(p, obj_);
    if (!hp) continue;
    Bits pref_p = hp->prefix_until(size_);
    for (int c : kids) {
      const IntervalSet* hc = eng.holdings(c, obj_);
      Bits pref_c = hc ? hc->prefix_until(size_) : 0;
      if (pref_c >= pref_p) continue;
      Bits w = eng.topology().local_bw(p, c);
      if (w <= 0) continue;
      Bits hi = std::min(pref_p, pref_c + w);
      SendAction s;
      s.from = p;
      s.to = c;
      s.items.push_back({obj_, {pref_c, hi}});
      out.sends.push_back(std::move(s));
    }
  }
}

bool BroadcastProc::done(const Engine& eng) const {
  if (size_ == 0) return true;
  for (int m : tree_.members)
    if (!eng.holds(m, obj_, {0, size_})) return false;
  return true;
}

// ---- BroadcastPiecesProc ----------------------------------------------------

BroadcastPiecesProc::BroadcastPiecesProc(RouteTree tree, std::vector<Piece> pieces, ActGate gate)
    : tree_(std::move(tree)), pieces_(std::move(pieces)), gate_(std::move(gate)) {}

void BroadcastPiecesProc::tick(Engine& eng, Round& out) {
  for (const auto& [p, kids] : tree_.children) {
    if (!gate_(p)) continue;
    for (int c : kids) {
      Bits w = eng.topology().local_bw(p, c);
      if (w <= 0) continue;
      SendAction s;
      s.from = p;
      s.to = c;
      if (relay_bits(eng, p, c, pieces_, w, s) > 0) out.sends.push_back(std::move(s));
    }
  }
}

bool BroadcastPiecesProc::done(const Engine& eng) const {
  for (int m : tree_.members)
    for (const auto& piece : pieces_)
      if (!eng.holds(m, piece.obj, piece.range)) return false;
  return true;
}

// ---- GatherProc -------------------------------------------------------------

GatherProc::GatherProc(RouteTree tree, std::map<int, std::vector<Piece>> streams, ActGate gate)
    : tree_(std::move(tree)), streams_(std::move(streams)), gate_(std::move(gate)) {
  // pieces of member m are relayed by every node on the path m -> root
  for (const auto& [origin, pieces] : streams_) {
    int v = origin;
    for (;;) {
      for (const auto& p : pieces) via_[v].push_back(&p);
      if (v == tree_.root) break;
      v = tree_.parent.at(v);
    }
  }
}

void GatherProc::tick(Engine& eng, Round& out) {
  for (const auto& [c, pptrs] : via_) {
    if (c == tree_.root || !gate_(c)) continue;
    int p = tree_.parent.at(c);
    Bits w = eng.topology().local_bw(c, p);
    if (w <= 0) continue;
    SendAction s;
    s.from = c;
    s.to = p;
    Bits taken = 0;
    for (const Piece* piece : pptrs) {
      if (taken >= w) break;
      for (const auto& sp : sendable_spans(eng, c, p, *piece)) {
        if (taken >= w) break;
        Bits len = std::min(sp.len(), w - taken);
        s.items.push_back({piece->obj, {sp.lo, sp.lo + len}});
        taken += len;
      }
    }
    if (taken > 0) out.sends.push_back(std::move(s));
  }
}

bool GatherProc::done(const Engine& eng) const {
  for (const auto& [origin, pieces] : streams_)
    for (const auto& piece : pieces)
      if (!eng.holds(tree_.root, piece.obj, piece.range)) return false;
  return true;
}

// ---- SliceWriteProc ----------------------------------------------------------

SliceWriteProc::SliceWriteProc(std::string file, std::vector<WriteSlice> slices, ActGate gate)
    : file_(std::move(file)), slices_(std::move(slices)), gate_(std::move(gate)) {
  written_.assign(slices_.size(), 0);
}

void SliceWriteProc::tick(Engine& eng, Round& out) {
  for (size_t i = 0; i < slices_.size(); ++i) {
    const auto& sl = slices_[i];
    Bits len = sl.src.len();
    if (written_[i] >= len || !gate_(sl.node)) continue;
    Bits bc = eng.topology().cloud_bw(sl.node);
    if (bc <= 0) continue;
    // writable prefix: held bits of the slice beyond what is written
    const IntervalSet* h = eng.holdings(sl.node, sl.obj);
    if (!h) continue;
    Bits lo = sl.src.lo + written_[i];
    Bits have_hi = lo;
    for (const auto& sp : h->spans()) {
      if (sp.lo <= lo && lo < sp.hi) {
        have_hi = std::min(sp.hi, sl.src.hi);
        break;
      }
    }
    Bits chunk = std::min(bc, have_hi - lo);
    if (chunk <= 0) continue;
    CloudWriteAction w;
    w.node = sl.node;
    w.file = file_;
    w.obj = sl.obj;
    w.items.push_back({{lo, lo + chunk}, sl.file_off + (lo - sl.src.lo)});
    out.writes.push_back(std::move(w));
    written_[i] += chunk;
  }
}

bool SliceWriteProc::done(const Engine&) const {
  for (size_t i = 0; i < slices_.size(); ++i)
    if (written_[i] < slices_[i].src.len()) return false;
  return true;
}

// ---- SliceReadProc -----------------------------------------------------------

SliceReadProc::SliceReadProc(std::string file, std::vector<ReadSlice> slices,
                             std::function<bool(const Engine&, int)> ready, ActGate gate)
    : file_(std::move(file)),
      slices_(std::move(slices)),
      ready_(std::move(ready)),
      gate_(std::move(gate)) {
  read_.assign(slices_.size(), 0);
}

void SliceReadProc::tick(Engine& eng, Round& out) {
  for (size_t i = 0; i < slices_.size(); ++i) {
    const auto& sl = slices_[i];
    Bits len = sl.file_range.len();
    if (read_[i] >= len || !gate_(sl.node)) continue;
    if (ready_ && !ready_(eng, sl.node)) continue;
    Bits bc = eng.topology().cloud_bw(sl.node);
    if (bc <= 0) continue;
    // readable prefix of the remaining slice (written bits only)
    IntervalSet written = eng.file_written(file_);
    Bits lo = sl.file_range.lo + read_[i];
    Bits avail_hi = lo;
    for (const auto& sp : written.spans()) {
      if (sp.lo <= lo && lo < sp.hi) {
        avail_hi = std::min(sp.hi, sl.file_range.hi);
        break;
      }
    }
    Bits chunk = std::min(bc, avail_hi - lo);
    if (chunk <= 0) continue;
    CloudReadAction r;
    r.node = sl.node;
    r.file = file_;
    r.ranges.push_back({lo, lo + chunk});
    out.reads.push_back(std::move(r));
    read_[i] += chunk;
  }
}

bool SliceReadProc::done(const Engine&) const {
  for (size_t i = 0; i < slices_.size(); ++i)
    if (read_[i] < slices_[i].file_range.len()) return false;
  return true;
}

// ---- StartWaveProc -----------------------------------------------------------

StartWaveProc::StartWaveProc(Engine& eng, RouteTree tree, const std::string& tag, ActGate gate)
    : tree_(std::move(tree)), gate_(std::move(gate)) {
  start_ = eng.declare_control(tree_.root, tag + ":start");
}

void StartWaveProc::tick(Engine& eng, Round& out) {
  for (const auto& [p, kids] : tree_.children) {
    if (!gate_(p) || !eng.holds(p, start_, {0, 1})) continue;
    for (int c : kids) {
      if (eng.holds(c, start_, {0, 1})) continue;
      if (eng.topology().local_bw(p, c) < 1) continue;
      SendAction s;
      s.from = p;
      s.to = c;
      s.items.push_back({start_, {0, 1}});
      out.sends.push_back(std::move(s));
    }
  }
}

bool StartWaveProc::done(const Engine& eng) const {
  for (int m : tree_.members)
    if (!eng.holds(m, start_, {0, 1})) return false;
  return true;
}

bool StartWaveProc::started(const Engine& eng, int node) const {
  return eng.holds(node, start_, {0, 1});
}

// ---- AckWaveProc --------------------------------------------------------------

AckWaveProc::AckWaveProc(RouteTree tree, const std::string& tag,
                         std::function<bool(const Engine&, int)> local_done, ActGate gate)
    : tree_(std::move(tree)), tag_(tag), local_done_(std::move(local_done)),
      gate_(std::move(gate)) {}

bool AckWaveProc::subtree_acked(const Engine& eng, int m) const {
  // parent holds child's ack bit
  if (m == tree_.root) return false;
  auto it = ack_.find(m);
  if (it == ack_.end()) return false;
  return eng.holds(tree_.parent.at(m), it->second, {0, 1});
}

void AckWaveProc::tick(Engine& eng, Round& out) {
  for (int m : tree_.members) {
    if (m == tree_.root || subtree_acked(eng, m) || !gate_(m)) continue;
    if (!local_done_(eng, m)) continue;
    bool kids_ok = true;
    auto it = tree_.children.find(m);
    if (it != tree_.children.end())
      for (int c : it->second)
        if (!subtree_acked(eng, c)) {
          kids_ok = false;
          break;
        }
    if (!kids_ok) continue;
    int p = tree_.parent.at(m);
    if (eng.topology().local_bw(m, p) < 1) continue;
    auto ai = ack_.find(m);
    ObjectId ack;
    if (ai == ack_.end()) {
      ack = eng.declare_control(m, tag_ + ":ack:" + std::to_string(m));
      ack_[m] = ack;
    } else {
      ack = ai->second;
    }
    SendAction s;
    s.from = m;
    s.to = p;
    s.items.push_back({ack, {0, 1}});
    out.sends.push_back(std::move(s));
  }
}

bool AckWaveProc::done(const Engine& eng) const {
  if (!local_done_(eng, tree_.root)) return false;
  auto it = tree_.children.find(tree_.root);
  if (it != tree_.children.end())
    for (int c : it->second)
      if (!subtree_acked(eng, c)) return false;
  return true;
}

// ---- ConvergecastProc -----------------------------------------------------------

ConvergecastProc::ConvergecastProc(RouteTree tree, const CombineOp& op,
                                   std::map<int, ObjectId> inputs, ActGate gate)
    : tree_(std::move(tree)), op_(op), inputs_(std::move(inputs)), gate_(std::move(gate)) {}

ObjectId ConvergecastProc::subtree_value(Engine& eng, int m) {
  auto it = value_.find(m);
  if (it != value_.end()) return it->second;
  // computable once every child's product arrived in full
  auto ci = tree_.children.find(m);
  if (ci != tree_.children.end()) {
    for (int c : ci->second) {
      auto cv = value_.find(c);
      if (cv == value_.end()) return -1;
      if (cv->second != kUnit && !eng.holds_all(m, cv->second)) return -1;
    }
  }
  ObjectId acc = inputs_.at(m);
  if (ci != tree_.children.end())
    for (int c : ci->second) acc = eng.fold_full(m, op_, acc, value_.at(c));
  value_[m] = acc;
  return acc;
}

void ConvergecastProc::tick(Engine& eng, Round& out) {
  // leaves first: compute values where possible (bottom-up order = reverse BFS)
  for (auto it = tree_.members.rbegin(); it != tree_.members.rend(); ++it)
    subtree_value(eng, *it);
  if (product_ == -1) {
    auto rv = value_.find(tree_.root);
    if (rv != value_.end()) {
      product_ = rv->second;
      return;
    }
  }
  // forward computed values toward parents
  for (int m : tree_.members) {
    if (m == tree_.root || !gate_(m)) continue;
    auto v = value_.find(m);
    if (v == value_.end() || v->second == kUnit) continue;
    int p = tree_.parent.at(m);
    if (eng.holds_all(p, v->second)) continue;
    Bits w = eng.topology().local_bw(m, p);
    if (w <= 0) continue;
    SendAction s;
    s.from = m;
    s.to = p;
    if (relay_bits(eng, m, p, {{v->second, {0, op_.size()}}}, w, s) > 0)
      out.sends.push_back(std::move(s));
  }
}

bool ConvergecastProc::done(const Engine&) const { return product_ != -1; }

}  // namespace cwc
