#include "fars/rng.hpp"

#include <cmath>
#include <numbers>

namespace fars {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = mix64(master ^ 0xA5A5A5A5A5A5A5A5ULL);
  z = mix64(z + 0x9E3779B97F4A7C15ULL * (a + 1));
  z = mix64(z + 0x9E3779B97F4A7C15ULL * (b + 1));
  return z;
}

double Rng::uniform() {
  // 53-bit mantissa in [0, 1).
  return double(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

int Rng::sign() { return (gen_() >> 63) ? -1 : 1; }

Vector Rng::normals(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

} // namespace fars
