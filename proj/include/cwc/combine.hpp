#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cwc/bitvec.hpp"
#include "cwc/common.hpp"

namespace cwc {

// Associative binary operator over s-bit strings with a unit element. A modular
// operator also carries a grain partition s = g_1 + ... + g_K such that the
// concatenation of per-grain products equals the whole-operand product.
class CombineOp {
 public:
  using Apply = std::function<void(const BitVec& a, const BitVec& b, BitVec& out)>;
  using Sampler = std::function<BitVec(Rng&)>;

  CombineOp(std::string name, Bits s, bool commutative, Apply apply,
            std::vector<Bits> grains = {}, Sampler sampler = nullptr)
      : name_(std::move(name)),
        s_(s),
        commutative_(commutative),
        apply_(std::move(apply)),
        grains_(std::move(grains)),
        sampler_(std::move(sampler)) {
    Bits sum = 0;
    for (Bits g : grains_) sum += g;
    require(grains_.empty() || sum == s_, Errc::BadArgument, "grain partition must sum to s");
  }

  const std::string& name() const { return name_; }
  Bits size() const { return s_; }
  bool commutative() const { return commutative_; }
  bool modular() const { return !grains_.empty(); }
  const std::vector<Bits>& grains() const { return grains_; }
  Bits grain_size() const {
    Bits g = 0;
    for (Bits x : grains_) g = std::max(g, x);
    return g;
  }
  // grain boundaries as offsets, grains().size()+1 entries
  std::vector<Bits> grain_offsets() const;

  BitVec apply(const BitVec& a, const BitVec& b) const {
    BitVec out(s_);
    apply_(a, b, out);
    return out;
  }

  // left fold; empty input yields the unit (all-zero placeholder is not used,
  // callers handle the empty case explicitly where it matters)
  BitVec fold(const std::vector<BitVec>& xs) const;

  // a random valid operand (matmul2/compose8/addmod restrict the bit patterns)
  BitVec sample(Rng& rng) const {
    return sampler_ ? sampler_(rng) : BitVec::random(s_, rng);
  }

 private:
  std::string name_;
  Bits s_;
  bool commutative_;
  Apply apply_;
  std::vector<Bits> grains_;
  Sampler sampler_;
};

// bitwise xor over s bits; commutative, modular with unit grains
CombineOp make_xor_op(Bits s);
// per-word addition mod 2^width over s bits (s divisible by width); commutative, modular
CombineOp make_add_op(Bits s, int width = 16);
// 2x2 matrix product over GF(2), s = 4; non-commutative, holistic
CombineOp make_matmul2_op();
// composition of functions [8] -> [8], s = 24 (8 entries x 3 bits);
// non-commutative, holistic; product a*b maps x to b(a(x))
CombineOp make_compose8_op();
// per-coordinate addition mod M, m coordinates of ceil(log2 M) bits each
CombineOp make_addmod_op(int m, std::uint64_t modulus);

// the named battery used by the CLI: xor | add | matmul2 | compose8
CombineOp make_op_by_name(const std::string& name, Bits s);

}  // namespace cwc
