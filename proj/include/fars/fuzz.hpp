#pragma once

#include <cstdint>

#include "fars/model.hpp"

namespace fars {

// Deterministic random-model stream for property suites and the verify
// command. Model #index of a stream cycles through four structure styles
// (orthogonal/oblique x perfect-simple-structure/cross-loadings) and factor
// counts q in {1, 2, 3, 6}; every returned model passes validate_model.
FactorModel fuzz_model(std::uint64_t master_seed, int index);

// Style of model #index in the stream (0..3): bit 0 = cross-loadings present,
// bit 1 = oblique factor correlations.
int fuzz_style(int index);

} // namespace fars
