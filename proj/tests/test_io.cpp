#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "fars/error.hpp"
#include "fars/io.hpp"
#include "fars/linalg.hpp"
#include "fixtures.hpp"

using namespace fars;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "fars_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("model JSON round-trips at full precision") {
    const FactorModel m = fixtures::nine_item_model();
    const FactorModel back = model_from_json(model_to_json(m));
    CHECK(max_abs_diff(back.lambda, m.lambda) == 0.0);
    CHECK(max_abs_diff(back.phi, m.phi) == 0.0);
    CHECK((back.psi2 - m.psi2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("psi2 defaults to one minus the communalities") {
    const FactorModel m = model_from_json(
        R"({"lambda": [[0.8], [0.8]], "phi": [[1.0]]})");
    CHECK(m.psi2[0] == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(m.psi2[1] == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("model parse errors name the offending field") {
    const auto message_of = [](const std::string& text) {
        try {
            model_from_json(text);
            return std::string("no error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            return std::string(e.what());
        }
    };

    CHECK(message_of("{nonsense").find("JSON") != std::string::npos);
    CHECK(message_of(R"({"phi": [[1.0]]})").find("lambda") != std::string::npos);
    CHECK(message_of(R"({"lambda": [[0.5],[0.5,0.1]], "phi": [[1.0]]})")
              .find("lambda") != std::string::npos);
    CHECK(message_of(
              R"({"lambda": [[0.5],[0.5]], "phi": [[1.0]], "psi2": [0.75]})")
              .find("psi2") != std::string::npos);
}

TEST_CASE("a lambda/phi CSV pair loads like the JSON form") {
    const fs::path dir = temp_dir();
    std::ofstream(dir / "toy_lambda.csv") << "0.8\n0.7\n";
    std::ofstream(dir / "toy_phi.csv") << "1.0\n";

    const FactorModel m = load_model_file(dir / "toy_lambda.csv");
    CHECK(m.p() == 2);
    CHECK(m.q() == 1);
    CHECK(m.lambda(1, 0) == 0.7);
    CHECK(m.psi2[0] == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("ragged CSV rows are rejected") {
    const fs::path dir = temp_dir();
    std::ofstream(dir / "bad_lambda.csv") << "0.8,0.1\n0.7\n";
    std::ofstream(dir / "bad_phi.csv") << "1.0,0.0\n0.0,1.0\n";
    CHECK_THROWS_AS(load_model_file(dir / "bad_lambda.csv"), Error);
}

TEST_CASE("report CSV pins its column schema and clamps to the unit interval") {
    ReliabilityReport report;
    report.regression = Vector::Constant(2, 1.0 + 5e-11); // round-off overshoot
    report.bartlett = Vector::Constant(2, 0.5);
    report.mcdonald = Vector::Constant(2, -5e-12);
    report.determinacy = Vector::Constant(2, 0.8);

    const std::string csv = report_to_csv(report);
    CHECK(csv.rfind("factor,r_tr,r_tb,r_tm,determinacy,determinacy_sq\n", 0) ==
          0);
    CHECK(count_lines(csv) == 3);
    CHECK(csv.find("1,1,0.5,0,") != std::string::npos); // clamped both ways
}

TEST_CASE("report JSON carries the premise flags and raw slacks") {
    const std::string json =
        report_to_json(reliability_report(fixtures::nine_item_model()));
    CHECK(json.find("premise_orthogonal") != std::string::npos);
    CHECK(json.find("information_offdiag") != std::string::npos);
    CHECK(json.find("premises_hold") != std::string::npos);
}

TEST_CASE("display table rounds to three decimals") {
    const std::string table =
        report_table(reliability_report(fixtures::nine_item_model()));
    CHECK(table.find("0.594") != std::string::npos);
    CHECK(table.find("0.527") != std::string::npos);
    CHECK(table.find("0.5942") == std::string::npos);
}

TEST_CASE("aggregate CSV pins its column schema") {
    SimulationCondition c;
    c.q = 2;
    c.loads_per_factor = 3;
    c.l = 0.7;
    c.condition_index = 0;
    const std::vector<AggregateRow> rows =
        aggregate_results({run_condition(c)});

    REQUIRE(rows.size() == 4 * 2);
    const std::string csv = aggregate_to_csv(rows);
    CHECK(csv.rfind("condition,q,loads_per_factor,p,l,sl,r,n,replications,"
                    "model_error,quantity,factor,mean,median,sd,min,max,used,"
                    "nonconverged,heywood,inadmissible\n",
                    0) == 0);
    CHECK(count_lines(csv) == 9);
    CHECK(csv.find("regression") != std::string::npos);
    CHECK(csv.find("determinacy") != std::string::npos);
}

TEST_CASE("simulation configs parse with per-condition defaults") {
    const std::string text = R"({
      "master_seed": 77,
      "conditions": [
        {"l": 0.6},
        {"q": 3, "loads_per_factor": 4, "l": 0.5, "sl": 0.1, "r": 0.3,
         "n": 250, "replications": 20,
         "model_error": {"pi_minor": 0.08}}
      ]
    })";
    const auto conditions = conditions_from_json(text);
    REQUIRE(conditions.size() == 2);

    CHECK(conditions[0].q == 6);
    CHECK(conditions[0].l == 0.6);
    CHECK(conditions[0].n == 0);
    CHECK(conditions[0].master_seed == 77);
    CHECK(conditions[0].condition_index == 0);
    CHECK_FALSE(conditions[0].model_error.enabled);

    CHECK(conditions[1].q == 3);
    CHECK(conditions[1].n == 250);
    CHECK(conditions[1].replications == 20);
    CHECK(conditions[1].model_error.enabled);
    CHECK(conditions[1].model_error.pi_minor == 0.08);
    CHECK(conditions[1].condition_index == 1);

    CHECK_THROWS_AS(conditions_from_json("{}"), Error);
    CHECK_THROWS_AS(conditions_from_json(R"({"conditions": [{"l": "x"}]})"),
                    Error);
}

TEST_CASE("fmt_double emits shortest round-trip decimals") {
    CHECK(fmt_double(0.1) == "0.1");
    CHECK(fmt_double(1.0) == "1");
    CHECK(fmt_double(0.5266953232996097) == "0.5266953232996097");
}

TEST_CASE("atomic_write replaces content in one step") {
    const fs::path target = temp_dir() / "atomic.txt";
    atomic_write(target, "first");
    CHECK(slurp(target) == "first");
    atomic_write(target, "second");
    CHECK(slurp(target) == "second");
}

TEST_CASE("per-replication archive serializes condition metadata") {
    SimulationCondition c;
    c.q = 2;
    c.loads_per_factor = 3;
    c.l = 0.7;
    const std::string json = replications_to_json(run_condition(c));
    CHECK(json.find("replications") != std::string::npos);
    CHECK(json.find("converged") != std::string::npos);
}
