#include "fars/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "fars/error.hpp"
#include "fars/fa.hpp"
#include "fars/linalg.hpp"
#include "fars/reliability.hpp"
#include "fars/rng.hpp"

namespace fars {

namespace {

// Substream tags; replication streams use the replication index directly.
constexpr std::uint64_t kMinorWTag = 0xF00DF00DF00DF00DULL;
constexpr std::uint64_t kMinorScoreXor = 0x5DEECE66DB0D2B45ULL;

std::string cell_label(const SimulationCondition& c) {
  return "cell(p/q=" + std::to_string(c.loads_per_factor) +
         ", l=" + std::to_string(c.l) + ", sl=" + std::to_string(c.sl) +
         ", r=" + std::to_string(c.r) + ")";
}

// Shared generative path. Per row: f = n_root * z (q draws), e (p draws) from
// the main stream; minor-factor scores g (m draws) from the minor stream so
// the (f, e) draws match the no-model-error run at equal seeds.
Matrix draw_rows(const FactorModel& model, const Matrix* w,
                 const Vector& unique_sd, Index n, Rng& main_rng,
                 Rng* minor_rng) {
  const Index p = model.p();
  const Index q = model.q();
  const Matrix n_root = phi_root(model.phi);
  Matrix data(n, p);
  Vector z(q), e(p);
  Vector g = w ? Vector(w->cols()) : Vector();
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < q; ++k) z[k] = main_rng.normal();
    for (Index j = 0; j < p; ++j) e[j] = main_rng.normal();
    Vector row = model.lambda * (n_root * z) + unique_sd.cwiseProduct(e);
    if (w) {
      for (Index k = 0; k < w->cols(); ++k) g[k] = minor_rng->normal();
      row += (*w) * g;
    }
    data.row(i) = row;
  }
  return data;
}

// One sampled replication: correlation -> extraction -> rotation ->
// re-standardization -> alignment -> closed-form reliabilities at estimates.
ReplicationRecord run_replication(const SimulationCondition& c,
                                  const FactorModel& population,
                                  const Matrix* w, const Vector& unique_sd,
                                  Index rep) {
  ReplicationRecord rec;
  const std::uint64_t seed =
      derive_seed(c.master_seed, std::uint64_t(c.condition_index),
                  std::uint64_t(rep));
  Rng main_rng(seed);
  Rng minor_rng(seed ^ kMinorScoreXor);

  try {
    const Matrix data = draw_rows(population, w, unique_sd, c.n, main_rng,
                                  w ? &minor_rng : nullptr);
    const CovarianceMatrix corr = sample_correlation(data);
    const ExtractionResult ext = ml_extract(corr, c.q);
    rec.converged = ext.converged;
    rec.heywood = ext.heywood_adjusted;
    if (!ext.converged) return rec;

    Matrix lambda_hat;
    Matrix phi_hat;
    if (c.r == 0.0) {
      lambda_hat = varimax(ext.model.lambda).loadings;
      phi_hat = Matrix::Identity(c.q, c.q);
    } else {
      const ObliqueRotation ob = promax(ext.model.lambda, 4);
      lambda_hat = ob.pattern;
      phi_hat = ob.phi;
    }

    // Re-standardize from the rotated estimates: the implied covariance is
    // regenerated from (lambda, phi) with psi2 = 1 - communalities, so its
    // diagonal is exactly 1.
    FactorModel estimate =
        standardized_from_pattern(std::move(lambda_hat), std::move(phi_hat));
    if (estimate.psi2.minCoeff() <= 0.0) return rec; // inadmissible estimate

    estimate = align_to_target(estimate, population);
    if (!validate_model(estimate).empty()) return rec;

    const CovarianceMatrix sigma_hat = reconstruct_sigma(estimate);
    rec.reliabilities.resize(3, c.q);
    rec.reliabilities.row(0) = reliability_regression(estimate, sigma_hat);
    rec.reliabilities.row(1) = reliability_bartlett(estimate);
    rec.reliabilities.row(2) = reliability_mcdonald(estimate, sigma_hat);
    rec.determinacy = determinacy(estimate, sigma_hat);
    rec.admissible = true;
  } catch (const Error&) {
    // Recorded, not fatal: the replication counts as failed.
    rec.admissible = false;
  }
  return rec;
}

void aggregate_into(ConditionResult& result) {
  const Index q = result.condition.q;
  result.mean = Matrix::Zero(4, q);
  result.median = Matrix::Zero(4, q);
  result.sd = Matrix::Zero(4, q);
  result.min = Matrix::Zero(4, q);
  result.max = Matrix::Zero(4, q);

  std::vector<const ReplicationRecord*> used;
  for (const auto& rec : result.replications) {
    if (!rec.converged) {
      ++result.n_nonconverged;
      continue;
    }
    if (rec.heywood) ++result.n_heywood;
    if (!rec.admissible) {
      ++result.n_inadmissible;
      continue;
    }
    used.push_back(&rec);
  }
  result.used = Index(used.size());
  if (used.empty()) return;

  std::vector<double> values(used.size());
  for (int row = 0; row < 4; ++row) {
    for (Index k = 0; k < q; ++k) {
      for (std::size_t i = 0; i < used.size(); ++i) {
        values[i] = row < 3 ? used[i]->reliabilities(row, k)
                            : used[i]->determinacy[k];
      }
      double sum = 0.0;
      double vmin = values[0], vmax = values[0];
      for (double v : values) {
        sum += v;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
      const double mean = sum / double(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double sd =
          values.size() > 1 ? std::sqrt(ss / double(values.size() - 1)) : 0.0;
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      const double median = sorted.size() % 2 == 1
                                ? sorted[mid]
                                : 0.5 * (sorted[mid - 1] + sorted[mid]);
      result.mean(row, k) = mean;
      result.median(row, k) = median;
      result.sd(row, k) = sd;
      result.min(row, k) = vmin;
      result.max(row, k) = vmax;
    }
  }
}

} // namespace

std::vector<SimulationCondition> study1_grid() {
  std::vector<SimulationCondition> grid;
  grid.reserve(40);
  Index idx = 0;
  for (Index lpf : {5, 10}) {
    for (double sl : {0.0, 0.10}) {
      for (double r : {0.0, 0.30}) {
        for (double l : {0.40, 0.50, 0.60, 0.70, 0.80}) {
          SimulationCondition c;
          c.q = 6;
          c.loads_per_factor = lpf;
          c.l = l;
          c.sl = sl;
          c.r = r;
          c.n = 0;
          c.replications = 1;
          c.condition_index = idx++;
          grid.push_back(c);
        }
      }
    }
  }
  return grid;
}

std::vector<SimulationCondition> study2_desk_grid(Index replications, Index n) {
  std::vector<SimulationCondition> grid;
  Index idx = 0;
  for (const auto& [sl, r] : {std::pair{0.0, 0.0}, std::pair{0.10, 0.30}}) {
    for (double l : {0.40, 0.80}) {
      SimulationCondition c;
      c.q = 6;
      c.loads_per_factor = 5;
      c.l = l;
      c.sl = sl;
      c.r = r;
      c.n = n;
      c.replications = replications;
      c.condition_index = idx++;
      grid.push_back(c);
    }
  }
  return grid;
}

std::vector<SimulationCondition> study3_desk_grid(Index replications, Index n) {
  auto grid = study2_desk_grid(replications, n);
  for (auto& c : grid) c.model_error.enabled = true;
  return grid;
}

FactorModel make_population_model(const SimulationCondition& c) {
  if (c.q < 1 || c.loads_per_factor < 1) {
    raise(ErrorCode::InadmissibleCondition, "empty grid cell");
  }
  const Index p = c.p();
  Matrix lambda(p, c.q);
  for (Index j = 0; j < p; ++j) {
    const Index own = j / c.loads_per_factor;
    for (Index k = 0; k < c.q; ++k) {
      if (k == own) {
        lambda(j, k) = c.l;
      } else {
        // Alternating signs keep secondary-loading column sums near zero.
        lambda(j, k) = ((j + k) % 2 == 0) ? c.sl : -c.sl;
      }
    }
  }
  Matrix phi = Matrix::Constant(c.q, c.q, c.r);
  phi.diagonal().setOnes();

  FactorModel model = standardized_from_pattern(std::move(lambda), std::move(phi));
  const auto violations = validate_model(model);
  if (!violations.empty()) {
    raise(ErrorCode::InadmissibleCondition,
          cell_label(c) + ": " + violations.front().message);
  }
  return model;
}

Matrix draw_sample(const FactorModel& model, Index n, std::uint64_t seed) {
  Rng rng(seed);
  return draw_rows(model, nullptr, model.psi2.cwiseSqrt(), n, rng, nullptr);
}

Matrix minor_loadings(Index p, int m, double pi_minor, double decay,
                      std::uint64_t seed) {
  if (m < 1) raise(ErrorCode::InadmissiblePerturbation, "m must be >= 1");
  Rng rng(seed);
  Vector share(m);
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    share[k] = std::pow(1.0 - decay, k);
    total += share[k];
  }
  Matrix w(p, m);
  for (Index j = 0; j < p; ++j) {
    for (int k = 0; k < m; ++k) {
      w(j, k) = rng.sign() * std::sqrt(pi_minor * share[k] / total);
    }
  }
  return w;
}

CovarianceMatrix minor_factor_perturb(const FactorModel& model, int m,
                                      double pi_minor, double decay,
                                      std::uint64_t seed) {
  if (pi_minor < 0.0 || pi_minor >= model.psi2.minCoeff()) {
    raise(ErrorCode::InadmissiblePerturbation,
          "pi_minor must lie in [0, min psi2); min psi2 = " +
              std::to_string(model.psi2.minCoeff()));
  }
  const Matrix w = minor_loadings(model.p(), m, pi_minor, decay, seed);
  Matrix sigma = model.lambda * model.phi * model.lambda.transpose();
  sigma += w * w.transpose();
  sigma += Matrix((model.psi2.array() - pi_minor).matrix().asDiagonal());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  if (es.eigenvalues().minCoeff() <= kEigClamp) {
    raise(ErrorCode::InadmissiblePerturbation,
          "perturbed covariance not positive definite");
  }
  return {std::move(sigma), CovKind::population};
}

int worker_count(Index replications) {
  int workers = int(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* env = std::getenv("FARS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = cap;
  }
  return int(std::min<Index>(workers, std::max<Index>(replications, 1)));
}

ConditionResult run_condition(const SimulationCondition& c) {
  ConditionResult result;
  result.condition = c;
  const FactorModel population = make_population_model(c);

  if (c.n == 0) {
    // Population mode: closed forms, one record.
    CovarianceMatrix sigma =
        c.model_error.enabled
            ? minor_factor_perturb(
                  population, c.model_error.m, c.model_error.pi_minor,
                  c.model_error.decay,
                  derive_seed(c.master_seed, std::uint64_t(c.condition_index),
                              kMinorWTag))
            : reconstruct_sigma(population);
    ReplicationRecord rec;
    rec.converged = true;
    rec.admissible = true;
    rec.reliabilities.resize(3, c.q);
    rec.reliabilities.row(0) = reliability_regression(population, sigma);
    rec.reliabilities.row(1) = reliability_bartlett(population);
    rec.reliabilities.row(2) = reliability_mcdonald(population, sigma);
    rec.determinacy = determinacy(population, sigma);
    result.replications.push_back(std::move(rec));
    aggregate_into(result);
    return result;
  }

  if (c.replications < 1) {
    raise(ErrorCode::InadmissibleCondition,
          "sampled mode needs replications >= 1");
  }

  Matrix w;
  Vector unique_sd = population.psi2.cwiseSqrt();
  const Matrix* w_ptr = nullptr;
  if (c.model_error.enabled) {
    if (c.model_error.pi_minor >= population.psi2.minCoeff()) {
      raise(ErrorCode::InadmissibleCondition,
            cell_label(c) + ": pi_minor >= min psi2");
    }
    w = minor_loadings(population.p(), c.model_error.m, c.model_error.pi_minor,
                       c.model_error.decay,
                       derive_seed(c.master_seed,
                                   std::uint64_t(c.condition_index), kMinorWTag));
    unique_sd = (population.psi2.array() - c.model_error.pi_minor).sqrt();
    w_ptr = &w;
  }

  result.replications.resize(c.replications);
  std::atomic<Index> next{0};
  auto worker = [&] {
    while (true) {
      const Index rep = next.fetch_add(1);
      if (rep >= c.replications) break;
      result.replications[rep] =
          run_replication(c, population, w_ptr, unique_sd, rep);
    }
  };
  const int workers = worker_count(c.replications);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  aggregate_into(result);
  return result;
}

std::vector<AggregateRow> aggregate_results(
    const std::vector<ConditionResult>& results) {
  std::vector<AggregateRow> rows;
  for (const auto& res : results) {
    for (int quantity = 0; quantity < 4; ++quantity) {
      for (Index k = 0; k < res.condition.q; ++k) {
        AggregateRow row;
        row.condition = res.condition;
        row.quantity = kQuantityNames[quantity];
        row.factor = k;
        row.mean = res.mean(quantity, k);
        row.median = res.median(quantity, k);
        row.sd = res.sd(quantity, k);
        row.min = res.min(quantity, k);
        row.max = res.max(quantity, k);
        row.used = res.used;
        row.n_nonconverged = res.n_nonconverged;
        row.n_heywood = res.n_heywood;
        row.n_inadmissible = res.n_inadmissible;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

} // namespace fars
