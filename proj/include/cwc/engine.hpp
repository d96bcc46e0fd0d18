#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwc/bitvec.hpp"
#include "cwc/combine.hpp"
#include "cwc/intervalset.hpp"
#include "cwc/topology.hpp"

namespace cwc {

using ObjectId = int;
constexpr ObjectId kUnit = 0;  // the operator unit element, O(1)-bit encodable

enum class Provenance { Unit, Input, Mask, MaskedInput, Control, Folded, Raw };

struct ObjectInfo {
  std::string name;
  Bits size = 0;
  Provenance prov = Provenance::Raw;
  int owner = -1;                  // node it originated at, -1 for none
  std::optional<BitVec> literal;   // payload bits in literal mode
  // for Folded objects
  std::string op;
  ObjectId left = -1, right = -1;
};

// ---- schedule data model ------------------------------------------------

struct SendItem {
  ObjectId obj;
  BitRange range;
};

struct SendAction {
  int from = -1, to = -1;
  std::vector<SendItem> items;
  Bits bits() const {
    Bits b = 0;
    for (const auto& it : items) b += it.range.len();
    return b;
  }
};

struct WriteItem {
  BitRange src;       // range of the source object
  Bits file_off = 0;  // destination offset in the file
};

struct CloudWriteAction {
  int node = -1;
  std::string file;
  ObjectId obj = -1;
  std::vector<WriteItem> items;
  Bits bits() const {
    Bits b = 0;
    for (const auto& it : items) b += it.src.len();
    return b;
  }
};

struct CloudReadAction {
  int node = -1;
  std::string file;
  std::vector<BitRange> ranges;
  Bits bits() const {
    Bits b = 0;
    for (const auto& r : ranges) b += r.len();
    return b;
  }
};

// Free local computation and control-message declarations that happen at the
// round boundary just before the round's transfers.
struct ComputeRec {
  enum Kind { DeclareFold, FoldRange, DeclareControl } kind;
  int node = -1;
  ObjectId result = -1;
  // DeclareFold
  std::string op;
  ObjectId left = -1, right = -1;
  // FoldRange
  BitRange range;
  // DeclareControl
  std::string name;
};

struct Round {
  std::vector<ComputeRec> computes;
  std::vector<SendAction> sends;
  std::vector<CloudWriteAction> writes;
  std::vector<CloudReadAction> reads;
  bool has_transfer() const { return !sends.empty() || !writes.empty() || !reads.empty(); }
};

struct Schedule {
  std::vector<Round> rounds;
  int horizon() const { return static_cast<int>(rounds.size()); }
};

struct RoundStats {
  Bits local_bits = 0;
  Bits cloud_write_bits = 0;
  Bits cloud_read_bits = 0;
};

struct RunTrace {
  int rounds_elapsed = 0;  // last round (1-based) with a non-null action
  std::vector<RoundStats> per_round;
  Bits total_local_bits = 0;
  Bits total_cloud_write_bits = 0;
  Bits total_cloud_read_bits = 0;
};

struct FilePiece {
  BitRange file_range;
  ObjectId obj;
  Bits src_off;  // offset of file_range.lo within obj
};

struct InitState {
  struct NodeObj {
    int node;
    std::string name;
    Bits size;
    std::optional<BitVec> literal;
    Provenance prov = Provenance::Input;
  };
  struct CloudFile {
    std::string name;
    BitVec content;
  };
  std::vector<NodeObj> inputs;
  std::vector<CloudFile> files;
};

// ---- the synchronous round engine ----------------------------------------
//
// Single-threaded and deterministic. All actions of a round happen
// simultaneously: sends and reads are validated against the state at the
// start of the round, and their effects are visible from the next round on.
class Engine {
 public:
  explicit Engine(Topology t);

  Engine(Engine&&) = default;
  Engine& operator=(Engine&&) = default;

  const Topology& topology() const { return topo_; }

  // -- declarations (round boundary) --
  ObjectId declare_object(std::string name, Bits size, Provenance prov, int owner,
                          std::optional<BitVec> literal);
  // declares and grants the whole object to `node`
  ObjectId declare_input(int node, std::string name, Bits size,
                         std::optional<BitVec> literal,
                         Provenance prov = Provenance::Input);
  // 1-bit control message owned by `node` (acks, start signals)
  ObjectId declare_control(int node, std::string name);
  // associative-combine result; value fixed at declaration, holdings granted
  // per computed range
  ObjectId declare_fold(const CombineOp& op, ObjectId left, ObjectId right);
  void compute_fold_range(int node, const CombineOp& op, ObjectId fold, BitRange range);
  // declare_fold + full-range compute, with unit shortcuts (returns the other
  // operand when one side is the unit)
  ObjectId fold_full(int node, const CombineOp& op, ObjectId left, ObjectId right);

  // initial cloud contents
  void seed_cloud_file(const std::string& file, const std::string& obj_name, BitVec content);

  // -- execution --
  void step(const Round& round);
  // convenience: execute a round carrying only the given transfers
  void step_transfers(std::vector<SendAction> sends, std::vector<CloudWriteAction> writes,
                      std::vector<CloudReadAction> reads);

  int round() const { return static_cast<int>(log_.rounds.size()); }
  int rounds_elapsed() const { return rounds_elapsed_; }
  const Schedule& log() const { return log_; }
  RunTrace trace() const;

  // -- state queries --
  const ObjectInfo& object(ObjectId id) const { return objects_.at(static_cast<size_t>(id)); }
  int object_count() const { return static_cast<int>(objects_.size()); }
  bool holds(int node, ObjectId obj, BitRange r) const;
  bool holds_all(int node, ObjectId obj) const;
  Bits held_bits(int node, ObjectId obj) const;
  const IntervalSet* holdings(int node, ObjectId obj) const;

  bool file_exists(const std::string& file) const { return files_.count(file) > 0; }
  IntervalSet file_written(const std::string& file) const;
  std::vector<FilePiece> resolve_file(const std::string& file, BitRange r) const;
  // stitched literal content over [0, size); nullopt when pieces lack literals
  std::optional<BitVec> file_value(const std::string& file, Bits size) const;
  std::optional<BitVec> object_literal(ObjectId id) const;

 private:
  struct FileState {
    // disjoint written pieces sorted by file offset
    std::vector<FilePiece> pieces;
    IntervalSet written;
  };

  void grant(int node, ObjectId obj, BitRange r);

  Topology topo_;
  std::vector<ObjectInfo> objects_;
  std::vector<std::map<ObjectId, IntervalSet>> memory_;  // per node
  std::map<std::string, FileState> files_;
  Schedule log_;
  std::vector<RoundStats> stats_;
  int rounds_elapsed_ = 0;
  std::vector<ComputeRec> pending_computes_;
};

struct RunResult {
  Engine engine;
  RunTrace trace;
};

using OpTable = std::map<std::string, CombineOp>;

// Executes `sched` on a fresh engine seeded with `init`. Fold computes inside
// the schedule are replayed through `ops` (keyed by operator name).
RunResult run_schedule(const Topology& t, const Schedule& sched, const InitState& init,
                       const OpTable& ops = {});

}  // namespace cwc
