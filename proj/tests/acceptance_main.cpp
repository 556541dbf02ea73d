// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned here on purpose; sub-checks print
// their own measured slack so a failure is diagnosable from the output alone.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fars/fa.hpp"
#include "fars/fuzz.hpp"
#include "fars/io.hpp"
#include "fars/linalg.hpp"
#include "fars/reliability.hpp"
#include "fars/simulation.hpp"
#include "fixtures.hpp"
#include "reference_impl.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fars;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kFuzzSeed = 987654321ULL; // matches the verify default
constexpr int kFuzzCount = 1000;

int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void verdict(int id, const char* label, bool pass, const std::string& detail,
             double seconds) {
    std::printf("[%s] %2d. %-46s %s (%.2f s)\n", pass ? "PASS" : "FAIL", id,
                label, detail.c_str(), seconds);
    if (!pass) ++failures;
}

void subline(const std::string& text) {
    std::printf("        %s\n", text.c_str());
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

// --------------------------------------------------------------- criterion 1

void criterion_appendix_fixture() {
    const auto start = Clock::now();
    const ReliabilityReport report =
        reliability_report(fixtures::nine_item_model());
    const refimpl::Reliabilities oracle = refimpl::reliabilities(
        fixtures::nine_item_lambda(), fixtures::nine_item_phi());

    double worst = 0.0;
    worst = std::max(worst, (report.regression - oracle.rtr).cwiseAbs().maxCoeff());
    worst = std::max(worst, (report.bartlett - oracle.rtb).cwiseAbs().maxCoeff());
    worst = std::max(worst, (report.mcdonald - oracle.rtm).cwiseAbs().maxCoeff());

    const double elapsed = seconds_since(start);
    verdict(1, "appendix fixture vs transliteration oracle",
            worst < 1e-10 && elapsed < 1.0, "max |gap| = " + fmt(worst),
            elapsed);
}

// --------------------------------------------------------------- criterion 2

void criterion_one_factor_closed_form() {
    const auto start = Clock::now();
    const FactorModel m = fixtures::one_factor_model(5, 0.8);
    const auto sigma = reconstruct_sigma(m);
    const double a = 5.0 * 0.64 / 0.36;
    const double expected = a / (1.0 + a);

    const double rho = determinacy(m, sigma)[0];
    double worst = 0.0;
    worst = std::max(worst, std::abs(reliability_regression(m, sigma)[0] - expected));
    worst = std::max(worst, std::abs(reliability_bartlett(m)[0] - expected));
    worst = std::max(worst, std::abs(reliability_mcdonald(m, sigma)[0] - expected));
    worst = std::max(worst, std::abs(rho * rho - expected));

    verdict(2, "one-factor closed form A/(1+A)", worst < 1e-10,
            "max |gap| = " + fmt(worst), seconds_since(start));
}

// ----------------------------------------------------------- criteria 3 + 4

void criteria_theorem_suite_and_identity() {
    const auto start = Clock::now();

    double worst_rb = 0.0;           // most negative R_tr - R_tb
    int worst_rb_model = -1;
    double worst_rm = 0.0;           // most negative R_tr - R_tm
    int worst_rm_model = -1;
    int rm_violations = 0;
    double worst_equal_b = 0.0, worst_equal_m = 0.0;
    int premise_models = 0;
    double worst_det = 0.0;          // most negative R_tr - det^2 when phi = I
    int orthogonal_models = 0;
    double worst_joreskog = 0.0;

    for (int i = 0; i < kFuzzCount; ++i) {
        const FactorModel m = fuzz_model(kFuzzSeed, i);
        const auto sigma = reconstruct_sigma(m);
        const ReliabilityReport report = reliability_report(m);

        const double gap_rb = (report.regression - report.bartlett).minCoeff();
        if (gap_rb < worst_rb) {
            worst_rb = gap_rb;
            worst_rb_model = i;
        }
        const double gap_rm = (report.regression - report.mcdonald).minCoeff();
        if (gap_rm < -1e-10) ++rm_violations;
        if (gap_rm < worst_rm) {
            worst_rm = gap_rm;
            worst_rm_model = i;
        }

        if (report.flags.premises_hold()) {
            ++premise_models;
            worst_equal_b =
                std::max(worst_equal_b, report.flags.gap_regression_bartlett);
            worst_equal_m =
                std::max(worst_equal_m, report.flags.gap_regression_mcdonald);
        }
        if (report.flags.premise_orthogonal) {
            ++orthogonal_models;
            worst_det = std::min(
                worst_det, report.flags.min_regression_minus_determinacy_sq);
        }

        worst_joreskog = std::max(
            worst_joreskog, fixtures::information_identity_gap(m, sigma));
    }
    const double elapsed = seconds_since(start);

    const bool pass_rb = worst_rb >= -1e-10;
    const bool pass_rm = worst_rm >= -1e-10;
    const bool pass_equal = premise_models > 0 && worst_equal_b < 1e-8 &&
                            worst_equal_m < 1e-8;
    const bool pass_det = orthogonal_models > 0 && worst_det >= -1e-10;
    const bool pass3 = pass_rb && pass_rm && pass_equal && pass_det &&
                       elapsed < 30.0;

    verdict(3, "ordering/equality suite on 1000 random models", pass3,
            pass3 ? "all sub-checks hold" : "see sub-checks", elapsed);
    subline("3a. min(R_tr - R_tb) = " + fmt(worst_rb) + " >= -1e-10  " +
            (pass_rb ? "pass" : "FAIL (model #" + std::to_string(worst_rb_model) +
                                    ")"));
    subline("3a. min(R_tr - R_tm) = " + fmt(worst_rm) + " >= -1e-10  " +
            (pass_rm ? "pass"
                     : "FAIL (" + std::to_string(rm_violations) +
                           " models, worst #" + std::to_string(worst_rm_model) +
                           ")"));
    if (!pass_rm && worst_rm_model >= 0) {
        // Print the worst counterexample so the failure is reproducible.
        const FactorModel m = fuzz_model(kFuzzSeed, worst_rm_model);
        const ReliabilityReport report = reliability_report(m);
        Index k_bad = 0;
        (report.regression - report.mcdonald).minCoeff(&k_bad);
        subline("    counterexample: correlated cross-loading model, q = " +
                std::to_string(m.q()) + ", factor " + std::to_string(k_bad + 1) +
                ": R_tr = " + std::to_string(report.regression[k_bad]) +
                ", R_tm = " + std::to_string(report.mcdonald[k_bad]));
        subline("    the per-factor McDonald reliability can exceed the "
                "regression one under correlated factors;");
        subline("    the domination claim is a theorem only for phi = I "
                "(see the orthogonal sub-checks, which pass).");
    }
    subline("3b. premise-gated equalities on " + std::to_string(premise_models) +
            " models: max gaps " + fmt(worst_equal_b) + ", " +
            fmt(worst_equal_m) + " < 1e-8  " + (pass_equal ? "pass" : "FAIL"));
    subline("3c. min(R_tr - det^2) over " + std::to_string(orthogonal_models) +
            " orthogonal models = " + fmt(worst_det) + " >= -1e-10  " +
            (pass_det ? "pass" : "FAIL"));

    verdict(4, "information-matrix identity on the same models",
            worst_joreskog < 1e-9, "max |gap| = " + fmt(worst_joreskog), 0.0);
}

// --------------------------------------------------------------- criterion 5

void criterion_kuder_richardson_bridge() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int p : {2, 5, 10, 30}) {
        for (double rho : {0.1, 0.3, 0.5, 0.8}) {
            const FactorModel m = fixtures::one_factor_model(p, std::sqrt(rho));
            const PredictorWeights unit{Matrix::Ones(p, 1), PredictorKind::custom};
            const double generic =
                reliability_generic(unit, m, reconstruct_sigma(m))[0];
            worst = std::max(worst, std::abs(generic - kr_parallel(p, rho)));
        }
    }
    verdict(5, "Kuder-Richardson bridge (16 grid points)", worst < 1e-12,
            "max |gap| = " + fmt(worst), seconds_since(start));
}

// --------------------------------------------------------------- criterion 6

void criterion_study1() {
    const auto start = Clock::now();

    bool clause1 = true; // sl=.10, r=.30: R_tr strictly above both, per factor
    std::string clause1_worst;
    bool clause2 = true; // sl=0: max |R_tb - R_tm| < 0.01
    double clause2_worst = 0.0;
    std::string clause2_cell;
    int cells = 0;

    for (const auto& c : study1_grid()) {
        const ConditionResult res = run_condition(c);
        ++cells;
        char label[64];
        std::snprintf(label, sizeof label, "p/q=%lld, l=%.2f, sl=%.2f, r=%.2f",
                      static_cast<long long>(c.loads_per_factor), c.l, c.sl, c.r);

        if (c.sl == 0.10 && c.r == 0.30) {
            for (Index k = 0; k < c.q; ++k) {
                if (!(res.mean(0, k) > res.mean(1, k) &&
                      res.mean(0, k) > res.mean(2, k))) {
                    clause1 = false;
                    clause1_worst = label;
                }
            }
        }
        if (c.sl == 0.0) {
            const double gap =
                (res.mean.row(1) - res.mean.row(2)).cwiseAbs().maxCoeff();
            if (gap > clause2_worst) {
                clause2_worst = gap;
                clause2_cell = label;
            }
            if (gap >= 0.01) clause2 = false;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = cells == 40 && clause1 && clause2 && elapsed < 10.0;

    verdict(6, "study-1 population grid (40 cells)", pass,
            pass ? "both clauses hold" : "see sub-checks", elapsed);
    subline(std::string("6.1 R_tr above both in every sl=.10, r=.30 cell:  ") +
            (clause1 ? "pass" : "FAIL (" + clause1_worst + ")"));
    subline("6.2 max |R_tb - R_tm| in sl=0 cells = " + fmt(clause2_worst) +
            " < 0.01  " + (clause2 ? "pass" : "FAIL (" + clause2_cell + ")"));
    if (!clause2) {
        subline("    with correlated factors the Bartlett and McDonald "
                "reliabilities separate even at sl=0");
        subline("    (r=.30 cells sit 0.01..0.05 apart; the orthogonal sl=0 "
                "cells agree to 1e-10).");
    }
}

// ----------------------------------------------------------- criteria 7 + 8

std::vector<ConditionResult> run_desk(std::vector<SimulationCondition> grid) {
    std::vector<ConditionResult> out;
    out.reserve(grid.size());
    for (auto& c : grid) {
        c.master_seed = 42;
        out.push_back(run_condition(c));
    }
    return out;
}

std::vector<ConditionResult> g_study2; // shared with criterion 8

void criterion_study2_desk() {
    const auto start = Clock::now();
    g_study2 = run_desk(study2_desk_grid(100, 500));

    bool chain = true;      // mean R_tr >= mean R_tb >= mean R_tm - 0.005
    std::string chain_cell;
    bool strict = true;     // sl=.1, r=.3 cells: mean R_tb > mean R_tm
    std::string strict_cell;

    for (const auto& res : g_study2) {
        char label[64];
        std::snprintf(label, sizeof label, "l=%.2f, sl=%.2f, r=%.2f",
                      res.condition.l, res.condition.sl, res.condition.r);
        for (Index k = 0; k < res.condition.q; ++k) {
            const double tr = res.mean(0, k), tb = res.mean(1, k),
                         tm = res.mean(2, k);
            if (!(tr >= tb - 1e-12 && tb >= tm - 0.005)) {
                chain = false;
                chain_cell = label;
            }
            if (res.condition.sl == 0.10 && res.condition.r == 0.30 &&
                !(tb > tm)) {
                strict = false;
                strict_cell = label;
            }
        }
    }

    // Determinism spot-check: the first cell rerun must aggregate identically.
    auto again = g_study2.front().condition;
    const ConditionResult rerun = run_condition(again);
    const bool deterministic =
        max_abs_diff(rerun.mean, g_study2.front().mean) == 0.0 &&
        max_abs_diff(rerun.sd, g_study2.front().sd) == 0.0;

    const double elapsed = seconds_since(start);
    const bool pass = chain && strict && deterministic && elapsed < 300.0;
    verdict(7, "study-2 desk scale (4 cells x 100 reps)", pass,
            pass ? "ordering chain holds, deterministic" : "see sub-checks",
            elapsed);
    subline(std::string("7.1 mean R_tr >= mean R_tb >= mean R_tm - 0.005:  ") +
            (chain ? "pass" : "FAIL (" + chain_cell + ")"));
    subline(std::string("7.2 mean R_tb > mean R_tm in the sl=.10, r=.30 cells:  ") +
            (strict ? "pass" : "FAIL (" + strict_cell + ")"));
    subline(std::string("7.3 rerun of cell 1 aggregates byte-identically:  ") +
            (deterministic ? "pass" : "FAIL"));
}

void criterion_study3_desk() {
    const auto start = Clock::now();
    const std::vector<ConditionResult> study3 = run_desk(study3_desk_grid(100, 500));

    double total = 0.0, worst = 0.0;
    int terms = 0;
    for (std::size_t cell = 0; cell < study3.size(); ++cell) {
        for (int quantity = 0; quantity < 3; ++quantity) {
            for (Index k = 0; k < study3[cell].condition.q; ++k) {
                const double change = std::abs(study3[cell].mean(quantity, k) -
                                               g_study2[cell].mean(quantity, k));
                total += change;
                worst = std::max(worst, change);
                ++terms;
            }
        }
    }
    const double mean_change = total / terms;
    const double elapsed = seconds_since(start);
    const bool pass = mean_change < 0.02 && elapsed < 300.0;
    verdict(8, "study-3 desk scale (minor-factor model error)", pass,
            "mean |change| = " + fmt(mean_change) + ", max = " + fmt(worst),
            elapsed);
}

// --------------------------------------------------------------- criterion 9

void criterion_fa_recovery() {
    const auto start = Clock::now();
    double worst_comm = 0.0;
    double worst_congruence = 1.0;
    std::string worst_cell;
    int failing_cells = 0;
    bool all_converged = true;

    for (const auto& c : study1_grid()) {
        const FactorModel pop = make_population_model(c);
        const auto result = ml_extract(reconstruct_sigma(pop), c.q);
        if (!result.converged) all_converged = false;

        worst_comm = std::max(worst_comm,
                              (communalities(result.model) - communalities(pop))
                                  .cwiseAbs()
                                  .maxCoeff());

        FactorModel est;
        est.psi2 = result.model.psi2;
        if (c.r == 0.0) {
            const Rotation rot = varimax(result.model.lambda);
            est.lambda = rot.loadings;
            est.phi = Matrix::Identity(c.q, c.q);
        } else {
            const ObliqueRotation obl = promax(result.model.lambda);
            est.lambda = obl.pattern;
            est.phi = obl.phi;
        }
        const FactorModel aligned = align_to_target(est, pop);
        const Matrix congruence = congruence_matrix(aligned.lambda, pop.lambda);
        const double cell_min = congruence.diagonal().minCoeff();
        if (cell_min < 0.98) ++failing_cells;
        if (cell_min < worst_congruence) {
            worst_congruence = cell_min;
            char label[64];
            std::snprintf(label, sizeof label, "p/q=%lld, l=%.2f, sl=%.2f, r=%.2f",
                          static_cast<long long>(c.loads_per_factor), c.l, c.sl,
                          c.r);
            worst_cell = label;
        }
    }

    const bool pass_comm = worst_comm < 1e-4;
    const bool pass_cong = worst_congruence >= 0.98;
    const bool pass = all_converged && pass_comm && pass_cong;
    verdict(9, "extraction recovery across the study-1 grid", pass,
            pass ? "both clauses hold" : "see sub-checks", seconds_since(start));
    subline("9.1 max communality gap on population input = " + fmt(worst_comm) +
            " < 1e-4  " + (pass_comm ? "pass" : "FAIL"));
    subline("9.2 min per-factor congruence after rotation+alignment = " +
            fmt(worst_congruence) + " >= 0.98  " +
            (pass_cong ? "pass"
                       : "FAIL (" + std::to_string(failing_cells) +
                             " cells, worst " + worst_cell + ")"));
    if (!pass_cong) {
        subline("    the failing cells all carry sl=.10 cross-loadings: the "
                "promax power target under-weights");
        subline("    real cross-loadings (distorting phi), and the "
                "alternating-sign pattern gives varimax a");
        subline("    genuinely better-scoring competing orientation, so no "
                "faithful implementation of the");
        subline("    named rotations returns the population pattern there "
                "(sl=0 cells recover >= 0.999).");
    }
}

// -------------------------------------------------------------- criterion 10

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

void criterion_cli_determinism() {
    const auto start = Clock::now();
    const fs::path base = fs::temp_directory_path() / "fars_acceptance_csv";
    fs::remove_all(base);
    fs::create_directories(base);

    const auto run = [&](const char* threads, const char* sub) {
        const fs::path dir = base / sub;
        fs::create_directories(dir);
        const std::string cmd = std::string("FARS_THREADS=") + threads + " \"" +
                                FARS_CLI_PATH +
                                "\" simulate --preset study2-desk --seed 42"
                                " --out " +
                                dir.string() + " >/dev/null 2>&1";
        return std::system(cmd.c_str()) == 0 ? slurp(dir / "results.csv")
                                             : std::string();
    };

    const std::string serial_a = run("1", "t1a");
    const std::string serial_b = run("1", "t1b");
    const std::string threaded = run("8", "t8");

    const bool pass = !serial_a.empty() && serial_a == serial_b &&
                      serial_a == threaded;
    verdict(10, "CLI determinism across thread counts", pass,
            pass ? "byte-identical CSV (1 vs 1 vs 8 threads)"
                 : "outputs differ or a run failed",
            seconds_since(start));
}

} // namespace

int main() {
    std::printf("acceptance criteria\n===================\n");
    criterion_appendix_fixture();
    criterion_one_factor_closed_form();
    criteria_theorem_suite_and_identity();
    criterion_kuder_richardson_bridge();
    criterion_study1();
    criterion_study2_desk();
    criterion_study3_desk();
    criterion_fa_recovery();
    criterion_cli_determinism();
    std::printf("===================\n%d criteria failed\n", failures);
    return failures;
}
