// fars: reliability reports, theorem verification, and simulation presets
// for factor score predictors.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "fars/error.hpp"
#include "fars/fuzz.hpp"
#include "fars/io.hpp"
#include "fars/model.hpp"
#include "fars/reliability.hpp"
#include "fars/simulation.hpp"
#include "fars/svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fars;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInadmissible = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::ParseError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_violations(const std::vector<Violation>& violations) {
    for (const auto& v : violations) {
        std::cerr << "violation: " << v.invariant;
        if (v.index >= 0) std::cerr << " [index " << v.index << "]";
        std::cerr << " (" << v.message << ", magnitude " << v.magnitude << ")\n";
    }
}

FactorModel load_validated_model(const fs::path& path) {
    FactorModel model = load_model_file(path);
    const auto violations = validate_model(model);
    if (!violations.empty()) {
        print_violations(violations);
        throw Error(ErrorCode::ParseError,
                    "model failed validation with " +
                        std::to_string(violations.size()) + " violation(s)");
    }
    return model;
}

int cmd_reliability(const fs::path& model_path, const fs::path& out_dir) {
    const FactorModel model = load_validated_model(model_path);
    const ReliabilityReport report = reliability_report(model);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    atomic_write(out_dir / "report.csv", report_to_csv(report));
    atomic_write(out_dir / "report.json", report_to_json(report));

    std::cout << report_table(report);
    std::cout << "wrote " << (out_dir / "report.csv").string() << " and "
              << (out_dir / "report.json").string() << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------------
// verify

struct CheckRow {
    std::string name;
    std::string premise; // "always", "holds", or "fails"
    bool applicable;
    double measured;
    std::string requirement;
    bool pass;
};

// Information-matrix identity: lambda' sigma^-1 lambda equals
// ((lambda' psi^-2 lambda)^-1 + phi)^-1.
double information_identity_gap(const FactorModel& model,
                                const CovarianceMatrix& sigma) {
    const Matrix lhs =
        model.lambda.transpose() *
        sigma.sigma.llt().solve(model.lambda);
    const Matrix g = model.lambda.transpose() *
                     model.psi2.cwiseInverse().asDiagonal() * model.lambda;
    const Matrix rhs = (g.inverse() + model.phi).inverse();
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

std::vector<CheckRow> model_checks(const FactorModel& model) {
    const CovarianceMatrix sigma = reconstruct_sigma(model);
    const ReliabilityReport report = reliability_report(model);
    const TheoremFlags& flags = report.flags;

    const double min_rb = (report.regression - report.bartlett).minCoeff();
    const double min_rm = (report.regression - report.mcdonald).minCoeff();
    const double jgap = information_identity_gap(model, sigma);

    std::vector<CheckRow> rows;
    rows.push_back({"ordering regression >= bartlett", "always", true, min_rb,
                    "min gap >= -1e-10", min_rb >= -1e-10});
    rows.push_back({"ordering regression >= mcdonald", "always", true, min_rm,
                    "min gap >= -1e-10", min_rm >= -1e-10});
    rows.push_back({"equal reliabilities (bartlett)",
                    flags.premises_hold() ? "holds" : "fails",
                    flags.premises_hold(), flags.gap_regression_bartlett,
                    "max |gap| < 1e-8",
                    !flags.premises_hold() ||
                        flags.gap_regression_bartlett < 1e-8});
    rows.push_back({"equal reliabilities (mcdonald)",
                    flags.premises_hold() ? "holds" : "fails",
                    flags.premises_hold(), flags.gap_regression_mcdonald,
                    "max |gap| < 1e-8",
                    !flags.premises_hold() ||
                        flags.gap_regression_mcdonald < 1e-8});
    rows.push_back({"determinacy^2 lower bound",
                    flags.premise_orthogonal ? "holds" : "fails",
                    flags.premise_orthogonal,
                    flags.min_regression_minus_determinacy_sq,
                    "min gap >= -1e-10",
                    !flags.premise_orthogonal ||
                        flags.min_regression_minus_determinacy_sq >= -1e-10});
    rows.push_back({"information identity", "always", true, jgap,
                    "max |gap| < 1e-9", jgap < 1e-9});
    return rows;
}

// Returns true when every applicable conclusion held.
bool print_check_table(const std::string& heading,
                       const std::vector<CheckRow>& rows) {
    std::printf("%s\n", heading.c_str());
    std::printf("  %-34s %-8s %-22s %13s  %s\n", "check", "premise",
                "requirement", "measured", "verdict");
    bool all_ok = true;
    for (const auto& row : rows) {
        const char* verdict =
            !row.applicable ? "n/a" : (row.pass ? "pass" : "FAIL");
        std::printf("  %-34s %-8s %-22s %13.4e  %s\n", row.name.c_str(),
                    row.premise.c_str(), row.requirement.c_str(), row.measured,
                    verdict);
        if (row.applicable && !row.pass) all_ok = false;
    }
    std::printf("\n");
    return all_ok;
}

int cmd_verify_model(const fs::path& model_path) {
    const FactorModel model = load_validated_model(model_path);
    const bool ok =
        print_check_table("model: " + model_path.string(), model_checks(model));
    std::printf("%s\n", ok ? "all applicable conclusions hold"
                           : "violations detected");
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_fuzz(int count, std::uint64_t seed) {
    // Two reference structures first, then the seeded random-model stream.
    SimulationCondition orth;
    orth.q = 6;
    orth.loads_per_factor = 5;
    orth.l = 0.8;
    SimulationCondition corr = orth;
    corr.sl = 0.10;
    corr.r = 0.30;

    bool all_ok = true;
    all_ok &= print_check_table("fixture: orthogonal simple structure",
                                model_checks(make_population_model(orth)));
    all_ok &= print_check_table("fixture: correlated with cross-loadings",
                                model_checks(make_population_model(corr)));

    struct Tally {
        const char* name;
        int violations = 0;
        double worst = 0.0; // most negative gap / largest excess
        int worst_index = -1;
        int applicable = 0;
    };
    Tally tallies[6] = {{"ordering regression >= bartlett"},
                        {"ordering regression >= mcdonald"},
                        {"equal reliabilities (bartlett)"},
                        {"equal reliabilities (mcdonald)"},
                        {"determinacy^2 lower bound"},
                        {"information identity"}};

    for (int i = 0; i < count; ++i) {
        const FactorModel model = fuzz_model(seed, i);
        const auto rows = model_checks(model);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!rows[k].applicable) continue;
            ++tallies[k].applicable;
            if (rows[k].pass) continue;
            ++tallies[k].violations;
            const bool more_extreme =
                tallies[k].worst_index < 0 ||
                (k == 0 || k == 1 || k == 4 ? rows[k].measured < tallies[k].worst
                                            : rows[k].measured > tallies[k].worst);
            if (more_extreme) {
                tallies[k].worst = rows[k].measured;
                tallies[k].worst_index = i;
            }
        }
    }

    std::printf("fuzz suite: %d models, seed %llu\n", count,
                (unsigned long long)seed);
    std::printf("  %-34s %11s %11s %13s  %s\n", "check", "applicable",
                "violations", "worst", "model");
    for (const auto& t : tallies) {
        if (t.violations == 0) {
            std::printf("  %-34s %11d %11d %13s  %s\n", t.name, t.applicable, 0,
                        "-", "-");
        } else {
            std::printf("  %-34s %11d %11d %13.4e  #%d\n", t.name, t.applicable,
                        t.violations, t.worst, t.worst_index);
            all_ok = false;
        }
    }
    std::printf("\n%s\n", all_ok ? "all applicable conclusions hold"
                                 : "violations detected");
    return all_ok ? kExitOk : kExitVerifyFailed;
}

// ----------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& preset, const fs::path& config_path,
                 bool config_given, std::uint64_t seed, bool seed_given,
                 Index reps, bool reps_given, bool svg, const fs::path& out_dir) {
    std::vector<SimulationCondition> conditions;
    if (preset == "study1") {
        conditions = study1_grid();
    } else if (preset == "study2-desk") {
        conditions = study2_desk_grid(reps_given ? reps : 100);
    } else if (preset == "study3-desk") {
        conditions = study3_desk_grid(reps_given ? reps : 100);
    } else if (preset == "custom") {
        if (!config_given) {
            std::cerr << "error: --preset custom requires --config\n";
            return kExitBadInput;
        }
        conditions = conditions_from_json(read_file(config_path));
        if (reps_given)
            for (auto& c : conditions) c.replications = reps;
    } else {
        std::cerr << "error: unknown preset '" << preset << "'\n";
        return kExitBadInput;
    }

    // --seed overrides any config-level master_seed; presets always take it.
    if (seed_given || preset != "custom")
        for (auto& c : conditions) c.master_seed = seed;

    const auto started = std::chrono::steady_clock::now();
    std::vector<ConditionResult> results;
    results.reserve(conditions.size());
    for (const auto& c : conditions) {
        try {
            results.push_back(run_condition(c));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::InadmissibleCondition ||
                e.code() == ErrorCode::InadmissiblePerturbation) {
                std::cerr << "inadmissible condition " << c.condition_index
                          << ": " << e.what() << "\n";
                return kExitInadmissible;
            }
            throw;
        }
        std::cerr << "condition " << (c.condition_index + 1) << "/"
                  << conditions.size() << " done\n";
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const auto rows = aggregate_results(results);
    atomic_write(out_dir / "results.csv", aggregate_to_csv(rows));
    std::cout << "wrote " << (out_dir / "results.csv").string() << " ("
              << rows.size() << " rows, " << elapsed << " ms)\n";

    if (svg) {
        for (const auto& path : write_study_svgs(results, out_dir))
            std::cout << "wrote " << path.string() << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability analysis for factor score predictors"};
    app.require_subcommand(1);

    auto* rel = app.add_subcommand(
        "reliability", "Per-factor reliability report for a model file");
    std::string rel_model;
    std::string rel_out = ".";
    rel->add_option("--model", rel_model, "Model file (JSON, or lambda CSV)")
        ->required();
    rel->add_option("--out", rel_out, "Output directory");

    auto* ver = app.add_subcommand(
        "verify", "Check the equality/ordering properties of the predictors");
    std::string ver_model;
    int ver_fuzz = 1000;
    std::uint64_t ver_seed = 987654321ULL;
    ver->add_option("--model", ver_model, "Verify this model instead of fuzzing");
    ver->add_option("--fuzz", ver_fuzz, "Number of random models")
        ->check(CLI::PositiveNumber);
    ver->add_option("--seed", ver_seed, "Fuzz stream seed");

    auto* sim = app.add_subcommand("simulate", "Run a simulation preset or config");
    std::string sim_preset = "custom";
    std::string sim_config;
    std::uint64_t sim_seed = 42;
    long long sim_reps = 0;
    bool sim_svg = false;
    std::string sim_out = ".";
    sim->add_option("--preset", sim_preset,
                    "study1 | study2-desk | study3-desk | custom");
    sim->add_option("--config", sim_config, "Condition grid (JSON)");
    sim->add_option("--seed", sim_seed, "Master seed");
    sim->add_option("--reps", sim_reps, "Replications per condition")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--svg", sim_svg, "Write one chart per (p/q, sl, r) panel");
    sim->add_option("--out", sim_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (rel->parsed()) return cmd_reliability(rel_model, rel_out);
        if (ver->parsed()) {
            if (!ver_model.empty()) return cmd_verify_model(ver_model);
            return cmd_verify_fuzz(ver_fuzz, ver_seed);
        }
        if (sim->parsed()) {
            return cmd_simulate(sim_preset, sim_config, sim->count("--config") > 0,
                                sim_seed, sim->count("--seed") > 0,
                                Index(sim_reps), sim->count("--reps") > 0,
                                sim_svg, sim_out);
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what()
                  << "\n";
        if (e.code() == ErrorCode::InadmissibleCondition ||
            e.code() == ErrorCode::InadmissiblePerturbation)
            return kExitInadmissible;
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
