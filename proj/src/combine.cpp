#include "cwc/combine.hpp"

#include <cmath>

namespace cwc {

std::vector<Bits> CombineOp::grain_offsets() const {
  std::vector<Bits> off{0};
  for (Bits g : grains_) off.push_back(off.back() + g);
  return off;
}

BitVec CombineOp::fold(const std::vector<BitVec>& xs) const {
  require(!xs.empty(), Errc::BadArgument, "fold of empty sequence");
  BitVec acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) acc = apply(acc, xs[i]);
  return acc;
}

CombineOp make_xor_op(Bits s) {
  return CombineOp("xor", s, /*commutative=*/true,
                   [s](const BitVec& a, const BitVec& b, BitVec& out) {
                     for (Bits i = 0; i < s; ++i) out.set(i, a.get(i) != b.get(i));
                   },
                   std::vector<Bits>(static_cast<size_t>(s), 1));
}

CombineOp make_add_op(Bits s, int width) {
  require(width >= 1 && width <= 63 && s % width == 0, Errc::BadArgument,
          "add operand size must be a multiple of the word width");
  std::vector<Bits> grains(static_cast<size_t>(s / width), width);
  std::uint64_t mask = (width == 64) ? ~0ull : ((1ull << width) - 1);
  return CombineOp("add", s, /*commutative=*/true,
                   [s, width, mask](const BitVec& a, const BitVec& b, BitVec& out) {
                     for (Bits off = 0; off < s; off += width) {
                       std::uint64_t x = a.read_uint(off, width), y = b.read_uint(off, width);
                       out.write_uint(off, width, (x + y) & mask);
                     }
                   },
                   grains);
}

CombineOp make_matmul2_op() {
  // entry layout: bit 2i+j = a[i][j]; product (a*b)[i][j] = sum_k a[i][k] b[k][j] over GF(2)
  return CombineOp("matmul2", 4, /*commutative=*/false,
                   [](const BitVec& a, const BitVec& b, BitVec& out) {
                     for (int i = 0; i < 2; ++i)
                       for (int j = 0; j < 2; ++j) {
                         bool v = false;
                         for (int k = 0; k < 2; ++k)
                           v ^= a.get(2 * i + k) && b.get(2 * k + j);
                         out.set(2 * i + j, v);
                       }
                   });
}

CombineOp make_compose8_op() {
  // (a*b)(x) = b(a(x)): left-to-right composition matches the ordered fold
  return CombineOp("compose8", 24, /*commutative=*/false,
                   [](const BitVec& a, const BitVec& b, BitVec& out) {
                     for (int x = 0; x < 8; ++x) {
                       std::uint64_t ax = a.read_uint(3 * x, 3);
                       std::uint64_t bax = b.read_uint(3 * static_cast<int>(ax), 3);
                       out.write_uint(3 * x, 3, bax);
                     }
                   },
                   {},
                   [](Rng& rng) {
                     BitVec v(24);
                     for (int x = 0; x < 8; ++x) v.write_uint(3 * x, 3, rng.below(8));
                     return v;
                   });
}

CombineOp make_addmod_op(int m, std::uint64_t modulus) {
  require(m >= 1 && modulus >= 2, Errc::BadArgument, "addmod needs m >= 1, M >= 2");
  int width = 1;
  while ((1ull << width) < modulus) ++width;
  Bits s = static_cast<Bits>(m) * width;
  std::vector<Bits> grains(static_cast<size_t>(m), width);
  return CombineOp("addmod", s, /*commutative=*/true,
                   [m, width, modulus](const BitVec& a, const BitVec& b, BitVec& out) {
                     for (int i = 0; i < m; ++i) {
                       std::uint64_t x = a.read_uint(i * width, width);
                       std::uint64_t y = b.read_uint(i * width, width);
                       out.write_uint(i * width, width, (x + y) % modulus);
                     }
                   },
                   grains,
                   [m, width, modulus](Rng& rng) {
                     BitVec v(static_cast<Bits>(m) * width);
                     for (int i = 0; i < m; ++i)
                       v.write_uint(i * width, width, rng.below(modulus));
                     return v;
                   });
}

CombineOp make_op_by_name(const std::string& name, Bits s) {
  if (name == "xor") return make_xor_op(s);
  if (name == "add") return make_add_op(s);
  if (name == "matmul2") return make_matmul2_op();
  if (name == "compose8") return make_compose8_op();
  fail(Errc::BadArgument, "unknown operator '" + name + "'");
}

}  // namespace cwc
