#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cwc {

// All sizes and bandwidths are integer bit counts.
using Bits = std::int64_t;

enum class Errc {
  NonIntegerBandwidth,
  FatLinkTooThin,
  BrokenRing,
  CausalityViolation,
  OverlappingCloudWrite,
  BandwidthExceeded,
  ReadWriteSameRound,
  ReadMissingData,
  ZeroCloudBandwidthEverywhere,
  ColoringImpossible,
  GrainTooWide,
  FileMissing,
  Unreachable,
  InvalidKappa,
  OutOfRange,
  PlanInvalid,
  BadTopology,
  BadArgument,
};

const char* errc_name(Errc c);

class CwcError : public std::runtime_error {
 public:
  CwcError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw CwcError(code, what);
}

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

inline Bits ceil_div(Bits a, Bits b) { return (a + b - 1) / b; }

// Deterministic 64-bit generator (splitmix64). std::uniform_int_distribution is
// not reproducible across standard libraries, so all seeded draws go through
// this and the bounded helpers below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound), bound >= 1, via rejection
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t limit = ~0ull - (~0ull % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x > limit);
    return x % bound;
  }

  // uniform in [lo, hi] inclusive
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace cwc
