#include "cwc/engine.hpp"

#include <algorithm>
#include <set>

namespace cwc {

Engine::Engine(Topology t) : topo_(std::move(t)) {
  memory_.resize(static_cast<size_t>(topo_.n()));
  ObjectInfo unit;
  unit.name = "unit";
  unit.size = 0;
  unit.prov = Provenance::Unit;
  objects_.push_back(std::move(unit));  // id 0
}

ObjectId Engine::declare_object(std::string name, Bits size, Provenance prov, int owner,
                                std::optional<BitVec> literal) {
  require(size >= 0, Errc::BadArgument, "negative object size");
  if (literal)
    require(literal->size() == size, Errc::BadArgument, "literal size mismatch");
  ObjectInfo info;
  info.name = std::move(name);
  info.size = size;
  info.prov = prov;
  info.owner = owner;
  info.literal = std::move(literal);
  objects_.push_back(std::move(info));
  return static_cast<ObjectId>(objects_.size() - 1);
}

ObjectId Engine::declare_input(int node, std::string name, Bits size,
                               std::optional<BitVec> literal, Provenance prov) {
  ObjectId id = declare_object(std::move(name), size, prov, node, std::move(literal));
  grant(node, id, {0, size});
  return id;
}

ObjectId Engine::declare_control(int node, std::string name) {
  ObjectId id = declare_object(name, 1, Provenance::Control, node, BitVec(1));
  grant(node, id, {0, 1});
  ComputeRec rec;
  rec.kind = ComputeRec::DeclareControl;
  rec.node = node;
  rec.result = id;
  rec.name = std::move(name);
  pending_computes_.push_back(std::move(rec));
  return id;
}

ObjectId Engine::declare_fold(const CombineOp& op, ObjectId left, ObjectId right) {
  const auto& l = object(left);
  const auto& r = object(right);
  require(l.size == op.size() && r.size == op.size(), Errc::BadArgument,
          "fold operand size mismatch");
  std::optional<BitVec> lit;
  if (l.literal && r.literal) lit = op.apply(*l.literal, *r.literal);
  ObjectId id = declare_object("fold#" + std::to_string(objects_.size()), op.size(),
                               Provenance::Folded, -1, std::move(lit));
  objects_.back().op = op.name();
  objects_.back().left = left;
  objects_.back().right = right;
  ComputeRec rec;
  rec.kind = ComputeRec::DeclareFold;
  rec.result = id;
  rec.op = op.name();
  rec.left = left;
  rec.right = right;
  pending_computes_.push_back(std::move(rec));
  return id;
}

void Engine::compute_fold_range(int node, const CombineOp& op, ObjectId fold, BitRange range) {
  const auto& f = object(fold);
  require(f.prov == Provenance::Folded && f.op == op.name(), Errc::BadArgument,
          "compute_fold_range on non-fold object");
  if (op.modular()) {
    auto off = op.grain_offsets();
    require(std::binary_search(off.begin(), off.end(), range.lo) &&
                std::binary_search(off.begin(), off.end(), range.hi),
            Errc::BadArgument, "fold range must span whole grains");
  } else {
    require(range.lo == 0 && range.hi == op.size(), Errc::BadArgument,
            "holistic fold must be computed on the whole operand");
  }
  require(holds(node, f.left, range) && holds(node, f.right, range),
          Errc::CausalityViolation,
          "node " + std::to_string(node) + " lacks operand bits for " + f.name);
  grant(node, fold, range);
  ComputeRec rec;
  rec.kind = ComputeRec::FoldRange;
  rec.node = node;
  rec.result = fold;
  rec.range = range;
  pending_computes_.push_back(std::move(rec));
}

ObjectId Engine::fold_full(int node, const CombineOp& op, ObjectId left, ObjectId right) {
  if (left == kUnit) return right;
  if (right == kUnit) return left;
  ObjectId id = declare_fold(op, left, right);
  compute_fold_range(node, op, id, {0, op.size()});
  return id;
}

void Engine::seed_cloud_file(const std::string& file, const std::string& obj_name,
                             BitVec content) {
  Bits size = content.size();
  ObjectId id = declare_object(obj_name, size, Provenance::Raw, -1, std::move(content));
  FileState& st = files_[file];
  st.pieces.push_back({{0, size}, id, 0});
  st.written.add({0, size});
}

void Engine::grant(int node, ObjectId obj, BitRange r) {
  if (r.empty()) return;
  memory_[static_cast<size_t>(node)][obj].add(r);
}

bool Engine::holds(int node, ObjectId obj, BitRange r) const {
  if (object(obj).size == 0 || r.empty()) return true;  // unit-like objects are free
  const auto* h = holdings(node, obj);
  return h && h->contains(r);
}

bool Engine::holds_all(int node, ObjectId obj) const {
  return holds(node, obj, {0, object(obj).size});
}

Bits Engine::held_bits(int node, ObjectId obj) const {
  const auto* h = holdings(node, obj);
  return h ? h->count() : 0;
}

const IntervalSet* Engine::holdings(int node, ObjectId obj) const {
  const auto& mem = memory_[static_cast<size_t>(node)];
  auto it = mem.find(obj);
  return it == mem.end() ? nullptr : &it->second;
}

IntervalSet Engine::file_written(const std::string& file) const {
  auto it = files_.find(file);
  return it == files_.end() ? IntervalSet{} : it->second.written;
}

std::vector<FilePiece> Engine::resolve_file(const std::string& file, BitRange r) const {
  auto it = files_.find(file);
  require(it != files_.end(), Errc::FileMissing, "file '" + file + "' missing");
  std::vector<FilePiece> out;
  for (const auto& p : it->second.pieces) {
    Bits lo = std::max(p.file_range.lo, r.lo), hi = std::min(p.file_range.hi, r.hi);
    if (lo < hi) out.push_back({{lo, hi}, p.obj, p.src_off + (lo - p.file_range.lo)});
  }
  return out;
}

std::optional<BitVec> Engine::file_value(const std::string& file, Bits size) const {
  auto it = files_.find(file);
  if (it == files_.end()) return std::nullopt;
  if (!it->second.written.contains({0, size})) return std::nullopt;
  BitVec out(size);
  for (const auto& p : it->second.pieces) {
    const auto& lit = object(p.obj).literal;
    if (!lit) return std::nullopt;
    Bits lo = std::max<Bits>(p.file_range.lo, 0), hi = std::min(p.file_range.hi, size);
    if (lo < hi) out.copy_range(*lit, p.src_off + (lo - p.file_range.lo), lo, hi - lo);
  }
  return out;
}

std::optional<BitVec> Engine::object_literal(ObjectId id) const { return object(id).literal; }

void Engine::step(const Round& round) {
  // computes are applied through the declare/compute APIs between rounds and
  // recorded here; a Round passed in must not carry its own
  require(round.computes.empty(), Errc::BadArgument,
          "step takes transfers only; computes go through the engine API");
  Round recorded = round;
  recorded.computes = std::move(pending_computes_);
  pending_computes_.clear();

  const int n = topo_.n();
  // -- validate against start-of-round state --
  std::set<std::pair<int, int>> used_links;
  for (const auto& s : recorded.sends) {
    require(s.from >= 0 && s.from < n && s.to >= 0 && s.to < n && s.from != s.to,
            Errc::BadArgument, "send endpoints out of range");
    require(used_links.insert({s.from, s.to}).second, Errc::BadArgument,
            "two sends on one directed link in a round");
    Bits w = topo_.local_bw(s.from, s.to);
    require(s.bits() <= w, Errc::BandwidthExceeded,
            "send of " + std::to_string(s.bits()) + " bits over link (" +
                std::to_string(s.from) + "," + std::to_string(s.to) + ") with bandwidth " +
                std::to_string(w));
    for (const auto& it : s.items) {
      require(it.range.len() > 0, Errc::BadArgument, "empty send item");
      require(holds(s.from, it.obj, it.range), Errc::CausalityViolation,
              "node " + std::to_string(s.from) + " sends unheld bits of " +
                  object(it.obj).name);
    }
  }

  std::set<int> cloud_users;
  std::set<std::string> files_read, files_written;
  std::map<std::string, IntervalSet> written_now;
  for (const auto& w : recorded.writes) {
    require(w.node >= 0 && w.node < n, Errc::BadArgument, "write node out of range");
    require(cloud_users.insert(w.node).second, Errc::BadArgument,
            "two cloud actions by one node in a round");
    require(w.bits() <= topo_.cloud_bw(w.node), Errc::BandwidthExceeded,
            "cloud write of " + std::to_string(w.bits()) + " bits over link of node " +
                std::to_string(w.node) + " with bandwidth " +
                std::to_string(topo_.cloud_bw(w.node)));
    files_written.insert(w.file);
    for (const auto& it : w.items) {
      require(it.src.len() > 0, Errc::BadArgument, "empty write item");
      require(holds(w.node, w.obj, it.src), Errc::CausalityViolation,
              "node " + std::to_string(w.node) + " writes unheld bits of " +
                  object(w.obj).name);
      BitRange fr{it.file_off, it.file_off + it.src.len()};
      require(!written_now[w.file].intersects(fr), Errc::OverlappingCloudWrite,
              "overlapping writes to file '" + w.file + "' in one round");
      written_now[w.file].add(fr);
    }
  }
  for (const auto& r : recorded.reads) {
    require(r.node >= 0 && r.node < n, Errc::BadArgument, "read node out of range");
    require(cloud_users.insert(r.node).second, Errc::BadArgument,
            "two cloud actions by one node in a round");
    require(r.bits() <= topo_.cloud_bw(r.node), Errc::BandwidthExceeded,
            "cloud read of " + std::to_string(r.bits()) + " bits over link of node " +
                std::to_string(r.node) + " with bandwidth " +
                std::to_string(topo_.cloud_bw(r.node)));
    files_read.insert(r.file);
    auto it = files_.find(r.file);
    require(it != files_.end(), Errc::FileMissing,
            "read of missing file '" + r.file + "'");
    for (const auto& range : r.ranges) {
      require(range.len() > 0, Errc::BadArgument, "empty read range");
      require(it->second.written.contains(range), Errc::ReadMissingData,
              "read of unwritten range of file '" + r.file + "'");
    }
  }
  for (const auto& f : files_read)
    require(!files_written.count(f), Errc::ReadWriteSameRound,
            "file '" + f + "' both read and written in one round");

  // -- apply --
  RoundStats st;
  for (const auto& s : recorded.sends) {
    for (const auto& it : s.items) grant(s.to, it.obj, it.range);
    st.local_bits += s.bits();
  }
  for (const auto& w : recorded.writes) {
    FileState& fs = files_[w.file];
    for (const auto& it : w.items) {
      BitRange fr{it.file_off, it.file_off + it.src.len()};
      // drop any previously written piece overlapping fr (overwrite semantics)
      std::vector<FilePiece> kept;
      for (const auto& p : fs.pieces) {
        if (p.file_range.hi <= fr.lo || fr.hi <= p.file_range.lo) {
          kept.push_back(p);
          continue;
        }
        if (p.file_range.lo < fr.lo)
          kept.push_back({{p.file_range.lo, fr.lo}, p.obj, p.src_off});
        if (fr.hi < p.file_range.hi)
          kept.push_back({{fr.hi, p.file_range.hi}, p.obj,
                          p.src_off + (fr.hi - p.file_range.lo)});
      }
      kept.push_back({fr, w.obj, it.src.lo});
      std::sort(kept.begin(), kept.end(),
                [](const FilePiece& a, const FilePiece& b) {
                  return a.file_range.lo < b.file_range.lo;
                });
      fs.pieces = std::move(kept);
      fs.written.add(fr);
    }
    st.cloud_write_bits += w.bits();
  }
  for (const auto& r : recorded.reads) {
    for (const auto& range : r.ranges)
      for (const auto& p : resolve_file(r.file, range))
        grant(r.node, p.obj, {p.src_off, p.src_off + p.file_range.len()});
    st.cloud_read_bits += r.bits();
  }

  stats_.push_back(st);
  log_.rounds.push_back(std::move(recorded));
  if (log_.rounds.back().has_transfer()) rounds_elapsed_ = round();
}

void Engine::step_transfers(std::vector<SendAction> sends,
                            std::vector<CloudWriteAction> writes,
                            std::vector<CloudReadAction> reads) {
  Round r;
  r.sends = std::move(sends);
  r.writes = std::move(writes);
  r.reads = std::move(reads);
  step(r);
}

RunTrace Engine::trace() const {
  RunTrace t;
  t.rounds_elapsed = rounds_elapsed_;
  t.per_round = stats_;
  for (const auto& s : stats_) {
    t.total_local_bits += s.local_bits;
    t.total_cloud_write_bits += s.cloud_write_bits;
    t.total_cloud_read_bits += s.cloud_read_bits;
  }
  return t;
}

RunResult run_schedule(const Topology& t, const Schedule& sched, const InitState& init,
                       const OpTable& ops) {
  Engine eng(t);
  for (const auto& in : init.inputs)
    eng.declare_input(in.node, in.name, in.size, in.literal, in.prov);
  for (const auto& f : init.files) eng.seed_cloud_file(f.name, f.name + ":seed", f.content);

  for (const auto& round : sched.rounds) {
    // replay the round-boundary computes through the public API so the fresh
    // engine reproduces the recorded object ids
    for (const auto& rec : round.computes) {
      switch (rec.kind) {
        case ComputeRec::DeclareControl: {
          ObjectId id = eng.declare_control(rec.node, rec.name);
          require(id == rec.result, Errc::BadArgument, "replay id mismatch (control)");
          break;
        }
        case ComputeRec::DeclareFold: {
          auto it = ops.find(rec.op);
          require(it != ops.end(), Errc::BadArgument,
                  "replay needs operator '" + rec.op + "'");
          ObjectId id = eng.declare_fold(it->second, rec.left, rec.right);
          require(id == rec.result, Errc::BadArgument, "replay id mismatch (fold)");
          break;
        }
        case ComputeRec::FoldRange: {
          const auto& obj = eng.object(rec.result);
          auto it = ops.find(obj.op);
          require(it != ops.end(), Errc::BadArgument,
                  "replay needs operator '" + obj.op + "'");
          eng.compute_fold_range(rec.node, it->second, rec.result, rec.range);
          break;
        }
      }
    }
    Round transfers;
    transfers.sends = round.sends;
    transfers.writes = round.writes;
    transfers.reads = round.reads;
    eng.step(transfers);
  }
  RunTrace trace = eng.trace();
  return RunResult{std::move(eng), std::move(trace)};
}

}  // namespace cwc
