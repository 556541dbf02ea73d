#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

// FARS_CLI_PATH and FARS_DATA_DIR are injected by the build.
const char* cli_path() { return FARS_CLI_PATH; }
const char* data_dir() { return FARS_DATA_DIR; }

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

int count_data_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n > 0 ? n - 1 : 0; // minus the header
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fars_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& name) {
    const fs::path dir = fresh_dir(name + "_streams");
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string command = std::string("\"") + cli_path() + "\" " + args +
                                " > " + out.string() + " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

} // namespace

TEST_CASE("reliability command writes the report pair and prints the table") {
    const fs::path out = fresh_dir("rel_ok");
    const fs::path model = fs::path(data_dir()) / "example_model.json";
    const RunResult r = run_cli(
        "reliability --model " + model.string() + " --out " + out.string(),
        "rel_ok");

    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.594") != std::string::npos); // 3-decimal display
    CHECK(r.out.find("determinacy") != std::string::npos);

    const std::string csv = slurp(out / "report.csv");
    CHECK(csv.rfind("factor,r_tr,r_tb,r_tm,determinacy,determinacy_sq\n", 0) ==
          0);
    CHECK(count_data_lines(csv) == 3);
    CHECK(!slurp(out / "report.json").empty());
}

TEST_CASE("reliability command rejects malformed and invalid models") {
    const fs::path dir = fresh_dir("rel_bad");

    SUBCASE("missing file") {
        const RunResult r = run_cli(
            "reliability --model " + (dir / "nope.json").string(), "rel_miss");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("malformed JSON names the problem") {
        std::ofstream(dir / "broken.json") << "{\"lambda\": [[0.5";
        const RunResult r = run_cli(
            "reliability --model " + (dir / "broken.json").string(), "rel_mal");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("nonpositive uniqueness is reported with its index") {
        std::ofstream(dir / "badpsi.json")
            << R"({"lambda": [[0.6],[0.6]], "phi": [[1.0]],
                   "psi2": [0.64, 0.0]})";
        const RunResult r = run_cli(
            "reliability --model " + (dir / "badpsi.json").string(), "rel_psi");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("psi2") != std::string::npos);
        CHECK(r.err.find("1") != std::string::npos);
    }
}

TEST_CASE("verify accepts the example model") {
    const fs::path model = fs::path(data_dir()) / "example_model.json";
    const RunResult r =
        run_cli("verify --model " + model.string(), "verify_model");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ordering regression >= bartlett") != std::string::npos);
    CHECK(r.out.find("n/a") != std::string::npos); // premises fail, so gated
}

TEST_CASE("verify exits 2 on unreadable input") {
    const RunResult r = run_cli("verify --model /no/such/file.json", "verify_miss");
    CHECK(r.exit_code == 2);
}

TEST_CASE("study1 preset emits the full population table and panels") {
    const fs::path out = fresh_dir("study1");
    const RunResult r = run_cli(
        "simulate --preset study1 --svg --out " + out.string(), "study1");
    CHECK(r.exit_code == 0);

    const std::string csv = slurp(out / "results.csv");
    CHECK(count_data_lines(csv) == 40 * 4 * 6);
    CHECK(count_occurrences(csv, ",regression,") == 40 * 6);
    CHECK(count_occurrences(csv, ",bartlett,") == 40 * 6);
    CHECK(count_occurrences(csv, ",mcdonald,") == 40 * 6);
    CHECK(count_occurrences(csv, ",determinacy,") == 40 * 6);

    int panels = 0;
    for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().extension() == ".svg") ++panels;
    CHECK(panels == 8);
}

TEST_CASE("custom config runs through the simulate command") {
    const fs::path dir = fresh_dir("custom");
    std::ofstream(dir / "grid.json") << R"({
      "master_seed": 11,
      "conditions": [{"q": 3, "loads_per_factor": 4, "l": 0.7, "r": 0.2}]
    })";
    const RunResult r = run_cli(
        "simulate --config " + (dir / "grid.json").string() + " --out " +
            dir.string(),
        "custom");
    CHECK(r.exit_code == 0);
    CHECK(count_data_lines(slurp(dir / "results.csv")) == 4 * 3);
}

TEST_CASE("simulate flags bad input with the documented exit codes") {
    SUBCASE("unknown preset") {
        const RunResult r =
            run_cli("simulate --preset bogus", "sim_bogus");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("custom preset without a config") {
        const RunResult r = run_cli("simulate --preset custom", "sim_noconf");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("inadmissible cell is identified") {
        const fs::path dir = fresh_dir("sim_inadm");
        std::ofstream(dir / "grid.json") << R"({
          "conditions": [{"q": 6, "loads_per_factor": 5, "l": 0.8,
                          "sl": 0.4, "r": 0.0}]
        })";
        const RunResult r = run_cli(
            "simulate --config " + (dir / "grid.json").string() + " --out " +
                dir.string(),
            "sim_inadm");
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("inadmissible") != std::string::npos);
    }
}
