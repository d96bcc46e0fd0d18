#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cwc/engine.hpp"

namespace cwc {

// Next-hop structure the transfer procedures run on: a rooted tree over a set
// of processing nodes (a path is the wheel special case).
struct RouteTree {
  std::vector<int> members;             // deterministic order, root first for BFS trees
  int root = -1;
  std::map<int, int> parent;            // member -> next hop toward root
  std::map<int, std::vector<int>> children;
  std::map<int, int> depth;

  static RouteTree path(const std::vector<int>& nodes, int root_index);
  // BFS tree of the induced subgraph on `ball`, children ordered by (depth, id)
  static RouteTree bfs(const Topology& t, const std::vector<int>& ball, int root);
  int height() const;
};

// Per-node activity gate used for round-robin multiplexing between overlapping
// regions (true = the node may act for this procedure this round).
using ActGate = std::function<bool(int node)>;
inline ActGate always_act() {
  return [](int) { return true; };
}

// A procedure contributes actions to the current round based on the engine
// state at the round start. Procedures composed into one conductor call must
// use disjoint links and cloud endpoints.
class Proc {
 public:
  virtual ~Proc() = default;
  virtual void tick(Engine& eng, Round& out) = 0;
  virtual bool done(const Engine& eng) const = 0;
};

// Runs rounds until every procedure reports done. Returns rounds executed.
int run_procs(Engine& eng, const std::vector<Proc*>& procs, int max_rounds = 1 << 22);

// ---- concrete procedures --------------------------------------------------

struct Piece {
  ObjectId obj;
  BitRange range;
};

// store-and-forward spread of one object from the root to every tree member
class BroadcastProc : public Proc {
 public:
  BroadcastProc(RouteTree tree, ObjectId obj, Bits size, ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;

 private:
  RouteTree tree_;
  ObjectId obj_;
  Bits size_;
  ActGate gate_;
};

// spread a fixed piece set from the root to every member (cloudcast dissemination)
class BroadcastPiecesProc : public Proc {
 public:
  BroadcastPiecesProc(RouteTree tree, std::vector<Piece> pieces, ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;

 private:
  RouteTree tree_;
  std::vector<Piece> pieces_;
  ActGate gate_;
};

// move per-member pieces to the root (time-reverse of dissemination)
class GatherProc : public Proc {
 public:
  // streams: member -> pieces originating there (already or progressively held)
  GatherProc(RouteTree tree, std::map<int, std::vector<Piece>> streams,
             ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;

 private:
  RouteTree tree_;
  std::map<int, std::vector<Piece>> streams_;            // origin -> pieces
  std::map<int, std::vector<const Piece*>> via_;         // member -> pieces routed via it
  ActGate gate_;
};

struct WriteSlice {
  int node;
  ObjectId obj;
  BitRange src;       // range of obj this node writes
  Bits file_off;      // destination offset of src.lo in the file
};

// proportional slice writes, bc(node) bits per active round, sequential within
// the slice; a slice chunk is written as soon as the node holds it
class SliceWriteProc : public Proc {
 public:
  SliceWriteProc(std::string file, std::vector<WriteSlice> slices, ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;

 private:
  std::string file_;
  std::vector<WriteSlice> slices_;
  std::vector<Bits> written_;  // bits of each slice written so far
  ActGate gate_;
};

struct ReadSlice {
  int node;
  BitRange file_range;
};

// per-node slice reads of a cloud file, bc(node) bits per active round; an
// optional start gate (1-bit control wave) delays each node's first read
class SliceReadProc : public Proc {
 public:
  SliceReadProc(std::string file, std::vector<ReadSlice> slices,
                std::function<bool(const Engine&, int node)> ready, ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;

 private:
  std::string file_;
  std::vector<ReadSlice> slices_;
  std::vector<Bits> read_;  // bits of each slice read so far
  std::function<bool(const Engine&, int)> ready_;
  ActGate gate_;
};

// 1-bit "start" wave from the root down the tree
class StartWaveProc : public Proc {
 public:
  StartWaveProc(Engine& eng, RouteTree tree, const std::string& tag, ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;
  bool started(const Engine& eng, int node) const;

 private:
  RouteTree tree_;
  ObjectId start_;
  ActGate gate_;
};

// aggregated 1-bit acknowledgement wave toward the root: a member acks once
// its local condition holds and all children acks arrived
class AckWaveProc : public Proc {
 public:
  AckWaveProc(RouteTree tree, const std::string& tag,
              std::function<bool(const Engine&, int node)> local_done,
              ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;

 private:
  bool subtree_acked(const Engine& eng, int m) const;
  RouteTree tree_;
  std::string tag_;
  std::function<bool(const Engine&, int)> local_done_;
  std::map<int, ObjectId> ack_;  // lazily declared per member
  ActGate gate_;
};

// commutative convergecast up a tree: each member folds its input with its
// children's subtree products and forwards the result to its parent
class ConvergecastProc : public Proc {
 public:
  ConvergecastProc(RouteTree tree, const CombineOp& op, std::map<int, ObjectId> inputs,
                   ActGate gate = always_act());
  void tick(Engine& eng, Round& out) override;
  bool done(const Engine& eng) const override;
  ObjectId product() const { return product_; }  // valid once done

 private:
  ObjectId subtree_value(Engine& eng, int m);
  RouteTree tree_;
  const CombineOp& op_;
  std::map<int, ObjectId> inputs_;
  std::map<int, ObjectId> value_;  // member -> computed subtree product
  ObjectId product_ = -1;
  ActGate gate_;
};

// ---- helpers ---------------------------------------------------------------

// spans of `piece.range` held by `from` and missing at `to`
std::vector<BitRange> sendable_spans(const Engine& eng, int from, int to, const Piece& piece);

// fill `out` with up to `budget` bits of the given pieces (in order) that
// `from` holds and `to` lacks; returns bits taken
Bits relay_bits(const Engine& eng, int from, int to, const std::vector<Piece>& pieces,
                Bits budget, SendAction& out);

// floor-proportional slice allocation by cloud bandwidth with the remainder
// absorbed at `absorber` (index into members); returns per-member lengths
std::vector<Bits> proportional_slices(const Topology& t, const std::vector<int>& members,
                                      Bits s, int absorber);

}  // namespace cwc
