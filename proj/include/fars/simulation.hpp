#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fars/model.hpp"

namespace fars {

struct MinorFactorSettings {
  bool enabled = false;
  int m = 100;           // number of minor factors
  double pi_minor = 0.10; // unique variance share moved to minor factors
  double decay = 0.05;    // geometric taper of minor-factor shares
};

// One cell of a simulation grid. n = 0 means population-only (closed forms,
// no sampling). condition_index feeds the RNG substream derivation.
struct SimulationCondition {
  Index q = 6;
  Index loads_per_factor = 5;
  double l = 0.4;  // main loading
  double sl = 0.0; // secondary loading magnitude
  double r = 0.0;  // factor inter-correlation
  Index n = 0;
  Index replications = 1;
  MinorFactorSettings model_error;
  std::uint64_t master_seed = 0;
  Index condition_index = 0;

  Index p() const { return q * loads_per_factor; }
};

// 40 population cells: loads_per_factor {5,10} x sl {0,.10} x r {0,.30} x
// l {.40,.50,.60,.70,.80}, q = 6, population-only.
std::vector<SimulationCondition> study1_grid();

// Four sampled corner cells at loads_per_factor = 5:
// {l=.4,.8} x {(sl=0, r=0), (sl=.10, r=.30)}.
std::vector<SimulationCondition> study2_desk_grid(Index replications = 100,
                                                  Index n = 500);

// study2_desk_grid with minor-factor model error switched on.
std::vector<SimulationCondition> study3_desk_grid(Index replications = 100,
                                                  Index n = 500);

// Grid-cell population model: l at salient positions (items block-assigned),
// +/- sl at every non-salient position (sign alternates by item+factor
// parity), phi equicorrelated at r, psi2 = 1 - communalities. Raises
// InadmissibleCondition when the cell is not a valid standardized model.
FactorModel make_population_model(const SimulationCondition& c);

// n rows of x = lambda*f + psi*e with f = phi_root(phi) * z. Deterministic in
// seed; draw order per row is f then e.
Matrix draw_sample(const FactorModel& model, Index n, std::uint64_t seed);

// Minor-factor loading matrix W (p x m): random signs, column k's squared
// loading proportional to (1-decay)^k, every row's sum of squares exactly
// pi_minor.
Matrix minor_loadings(Index p, int m, double pi_minor, double decay,
                      std::uint64_t seed);

// Population covariance with model error:
// sigma* = lambda phi lambda' + W W' + diag(psi2 - pi_minor); unit diagonal
// by construction. Raises InadmissiblePerturbation when psi2 - pi_minor <= 0
// or sigma* is not positive definite.
CovarianceMatrix minor_factor_perturb(const FactorModel& model, int m,
                                      double pi_minor, double decay,
                                      std::uint64_t seed);

struct ReplicationRecord {
  bool converged = false;
  bool admissible = false; // estimates standardize into a valid model
  bool heywood = false;
  Matrix reliabilities; // 3 x q: regression, bartlett, mcdonald
  Vector determinacy;   // q
};

inline constexpr const char* kQuantityNames[4] = {"regression", "bartlett",
                                                  "mcdonald", "determinacy"};

struct ConditionResult {
  SimulationCondition condition;
  std::vector<ReplicationRecord> replications;
  // Aggregates over converged, admissible replications; rows follow
  // kQuantityNames, columns are factors.
  Matrix mean, median, sd, min, max;
  Index used = 0;
  Index n_nonconverged = 0;
  Index n_heywood = 0;   // converged replications with floored uniquenesses
  Index n_inadmissible = 0;
};

// Runs one cell. Sampled mode estimates a model per replication (extraction,
// rotation by r, re-standardization, alignment to the population target) and
// evaluates the closed-form reliabilities at the estimates. Replications run
// in parallel on worker_count() threads with per-replication substreams, so
// results are identical for any thread count.
ConditionResult run_condition(const SimulationCondition& c);

struct AggregateRow {
  SimulationCondition condition;
  std::string quantity;
  Index factor;
  double mean, median, sd, min, max;
  Index used, n_nonconverged, n_heywood, n_inadmissible;
};

// One row per condition x quantity x factor, in grid order.
std::vector<AggregateRow> aggregate_results(
    const std::vector<ConditionResult>& results);

// Worker threads for replication fan-out: FARS_THREADS when set, otherwise
// hardware concurrency, never more than the replication count.
int worker_count(Index replications);

} // namespace fars
