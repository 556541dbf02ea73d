#pragma once

#include <cstdint>
#include <random>

#include "fars/types.hpp"

namespace fars {

// Mixes (master, a, b) into an independent stream seed. Used to give each
// (condition, replication) pair its own substream so results do not depend
// on thread count or scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

// Deterministic normal/uniform source. mt19937_64 output is pinned by the
// standard; the normal transform is an explicit Box-Muller (cached pair)
// because std::normal_distribution is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(); // [0, 1)
  double normal();  // N(0, 1)
  int sign();       // +1 or -1, equiprobable

  // n independent N(0,1) draws, in draw order.
  Vector normals(Index n);

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace fars
