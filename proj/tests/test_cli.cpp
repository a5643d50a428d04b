// End-to-end checks of the holovote binary: exit codes, file outputs,
// determinism. The binary path arrives via the HOLOVOTE_CLI environment
// variable (set by the test harness).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <sys/wait.h>

namespace {

std::string cli_path() {
    const char* path = std::getenv("HOLOVOTE_CLI");
    REQUIRE_MESSAGE(path != nullptr, "HOLOVOTE_CLI must point at the holovote binary");
    return path;
}

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_raw(const std::string& command) {
    const std::string out_path = "cli_test_output.txt";
    const int status = std::system((command + " > " + out_path + " 2>&1").c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

RunResult run(const std::string& args) {
    return run_raw(cli_path() + " " + args);
}

bool file_exists(const std::string& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n')
            ++lines;
    return lines;
}

} // namespace

TEST_CASE("generate writes member and edge CSVs with the expected row counts") {
    std::remove("gen_test.members.csv");
    std::remove("gen_test.edges.csv");
    const auto result =
        run("generate --n 200 --seed 42 --model model2 --k 3 --out gen_test");
    CHECK(result.exit_code == 0);
    REQUIRE(file_exists("gen_test.members.csv"));
    REQUIRE(file_exists("gen_test.edges.csv"));
    CHECK(count_lines(slurp("gen_test.members.csv")) == 201); // header + members
    CHECK(count_lines(slurp("gen_test.edges.csv")) == 601);   // header + k * n

    const std::string members_first = slurp("gen_test.members.csv");
    const std::string edges_first = slurp("gen_test.edges.csv");
    const auto again = run("generate --n 200 --seed 42 --model model2 --k 3 --out gen_test");
    CHECK(again.exit_code == 0);
    CHECK(slurp("gen_test.members.csv") == members_first);
    CHECK(slurp("gen_test.edges.csv") == edges_first);
}

TEST_CASE("generate rejects bad flags without writing files") {
    std::remove("gen_bad.members.csv");
    std::remove("gen_bad.edges.csv");
    CHECK(run("generate --n 0 --out gen_bad").exit_code == 2);
    CHECK(run("generate --n 10 --model nosuch --out gen_bad").exit_code == 2);
    CHECK(run("generate --n 10 --participation 1.5 --out gen_bad").exit_code == 2);
    CHECK(run("generate --n 10 --model model1 --participation 0.0 --out gen_bad").exit_code ==
          2);
    CHECK(run("generate --n 10 --no-such-flag 1 --out gen_bad").exit_code == 2);
    CHECK_FALSE(file_exists("gen_bad.members.csv"));
    CHECK_FALSE(file_exists("gen_bad.edges.csv"));
}

TEST_CASE("a minimal sweep writes one full-participation record") {
    std::remove("sweep_min.csv");
    const auto result = run(
        "sweep --n 10 --topologies k0 --participation 1.0:1.0:1.0 --trials 1 --seed 1 "
        "--out sweep_min.csv");
    CHECK(result.exit_code == 0);
    REQUIRE(file_exists("sweep_min.csv"));
    const std::string csv = slurp("sweep_min.csv");
    CHECK(csv.rfind("topology,participation,mean_error,std_error,mean_stranded,trials\n", 0) ==
          0);
    CHECK(count_lines(csv) == 2);
    // mean_error column of the single row parses to <= 1e-12
    std::stringstream row(csv.substr(csv.find('\n') + 1));
    std::string field;
    std::getline(row, field, ','); // topology
    std::getline(row, field, ','); // participation
    std::getline(row, field, ','); // mean_error
    CHECK(std::stod(field) <= 1e-12);
}

TEST_CASE("sweep rejects a descending participation range") {
    std::remove("sweep_bad.csv");
    const auto result =
        run("sweep --n 10 --topologies k0 --participation 0.9:0.1:0.05 --trials 1 "
            "--out sweep_bad.csv");
    CHECK(result.exit_code == 2);
    CHECK_FALSE(file_exists("sweep_bad.csv"));
    CHECK(run("sweep --n 10 --topologies zZz --participation 1.0:1.0:1.0 --trials 1 "
              "--out sweep_bad.csv")
              .exit_code == 2);
    CHECK_FALSE(file_exists("sweep_bad.csv"));
}

TEST_CASE("sweep output is deterministic and --plot adds an SVG") {
    std::remove("sweep_det.csv");
    std::remove("sweep_det.svg");
    const std::string flags =
        "sweep --n 60 --topologies k0,k1d1 --participation 0.25:1.0:0.25 --trials 3 "
        "--seed 9 --mode renormalized --out sweep_det.csv --plot";
    CHECK(run(flags).exit_code == 0);
    REQUIRE(file_exists("sweep_det.csv"));
    REQUIRE(file_exists("sweep_det.svg"));
    const std::string csv = slurp("sweep_det.csv");
    const std::string svg = slurp("sweep_det.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(run(flags).exit_code == 0);
    CHECK(slurp("sweep_det.csv") == csv);
    CHECK(slurp("sweep_det.svg") == svg);
}

TEST_CASE("HOLOVOTE_SEED seeds the sweep when --seed is absent") {
    std::remove("sweep_env.csv");
    const std::string flags =
        "sweep --n 40 --topologies k0 --participation 0.5:1.0:0.5 --trials 2 --out sweep_env.csv";
    CHECK(run_raw("env HOLOVOTE_SEED=7 " + cli_path() + " " + flags).exit_code == 0);
    const std::string from_env = slurp("sweep_env.csv");
    CHECK(run(flags + " --seed 7").exit_code == 0);
    CHECK(slurp("sweep_env.csv") == from_env);
    CHECK(run(flags + " --seed 8").exit_code == 0);
    CHECK(slurp("sweep_env.csv") != from_env);
}

TEST_CASE("compare ranks topologies from a sweep CSV") {
    std::remove("sweep_cmp.csv");
    CHECK(run("sweep --n 80 --topologies k0,k1d1,k2d2 --participation 0.2:1.0:0.2 --trials 5 "
              "--seed 4 --mode renormalized --out sweep_cmp.csv")
              .exit_code == 0);
    const auto result = run("compare sweep_cmp.csv");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("area under the error curve") != std::string::npos);
    CHECK(result.output.find("per-fraction ranking") != std::string::npos);
    CHECK(result.output.find("k0 vs k1d1") != std::string::npos);

    SUBCASE("single topology still produces a summary") {
        std::remove("sweep_one.csv");
        CHECK(run("sweep --n 40 --topologies k0 --participation 0.5:1.0:0.5 --trials 2 "
                  "--out sweep_one.csv")
                  .exit_code == 0);
        const auto single = run("compare sweep_one.csv");
        CHECK(single.exit_code == 0);
        CHECK(single.output.find("k0") != std::string::npos);
    }
}

TEST_CASE("compare fails cleanly on missing or malformed input") {
    CHECK(run("compare no_such_file.csv").exit_code == 1);
    {
        std::ofstream out("truncated.csv");
        out << "topology,participation,mean_error,std_error,mean_stranded,trials\n";
        out << "k0,0.5,0.001\n";
    }
    const auto result = run("compare truncated.csv");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("line 2") != std::string::npos);
}

TEST_CASE("workspace demo prints the grow-then-prune story") {
    const auto result = run("workspace-demo");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("problem pool size history: 0 1 2 3 1") != std::string::npos);
    CHECK(result.output.find("solution pool size history: 0 1 2 3 1") != std::string::npos);
    CHECK(result.output.find("problem winner: p2") != std::string::npos);
    CHECK(result.output.find("solution winner: s1") != std::string::npos);

    SUBCASE("power weighting flips the bundled plurality") {
        const auto weighted = run("workspace-demo --power-weighted");
        CHECK(weighted.exit_code == 0);
        CHECK(weighted.output.find("problem winner: p2") != std::string::npos);
        CHECK(weighted.output.find("solution winner: s2") != std::string::npos);
    }
}

TEST_CASE("workspace demo accepts a scenario file and rejects a broken one") {
    {
        std::ofstream out("scenario.json");
        out << R"({
  "method": "borda",
  "problem": {
    "entries": [{"id": "p1", "author": 0}, {"id": "p2", "author": 1}],
    "ballots": [{"voter": 0, "ranking": ["p1", "p2"]},
                {"voter": 1, "ranking": ["p1", "p2"]}]
  },
  "solutions": {
    "p1": {
      "entries": [{"id": "s1", "author": 0}, {"id": "s2", "author": 1}],
      "ballots": [{"voter": 0, "ranking": ["s2", "s1"]},
                  {"voter": 1, "ranking": ["s2", "s1"]}]
    }
  }
})";
    }
    const auto result = run("workspace-demo --scenario scenario.json");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("problem winner: p1") != std::string::npos);
    CHECK(result.output.find("solution winner: s2") != std::string::npos);

    {
        std::ofstream out("broken.json");
        out << "{ not json";
    }
    CHECK(run("workspace-demo --scenario broken.json").exit_code == 1);
    CHECK(run("workspace-demo --scenario missing.json").exit_code == 1);
    CHECK(run("workspace-demo --power-weighted --scenario scenario.json").exit_code == 1);
}

TEST_CASE("bare or unknown invocations are usage errors") {
    CHECK(run("").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
}
