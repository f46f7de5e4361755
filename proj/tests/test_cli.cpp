#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdwave/problems.hpp"
#include "fdwave/solver.hpp"

// End-to-end checks of the installed binary: exit codes, output fields,
// CSV round-trips, JSON manifests.

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "/tmp/fdwave_cli_out.txt";
    const std::string cmd = std::string(FDWAVE_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

struct CsvRow {
    int level;
    double error;
    bool has_order;
    double order;
};

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "level,error,order");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CsvRow r{};
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        r.level = std::stoi(line.substr(0, c1));
        r.error = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const std::string ord = line.substr(c2 + 1);
        r.has_order = !ord.empty();
        if (r.has_order) r.order = std::stod(ord);
        rows.push_back(r);
    }
    return rows;
}

} // namespace

TEST_CASE("solve subcommand") {
    auto r = run_cli("solve --problem example1 --scheme I --beta 1.5 --nx 100 --nt 16");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "max-l2"));
    CHECK(contains(r.out, "final-l2"));
    CHECK(contains(r.out, "diverged  no"));
}

TEST_CASE("solve reproduces reference digits end to end") {
    auto r = run_cli("solve --problem example1 --scheme I --beta 1.5 --nx 1000 --nt 64");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "max-l2    5.016"));

    auto r2 = run_cli(
        "solve --problem example2 --scheme III1 --beta 1.2 --nx 32 --nt 32 --metric final");
    CHECK(r2.exit_code == 0);
    CHECK(contains(r2.out, "final-l2  8.465"));
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("solve --problem example1 --scheme XX --beta 1.5 --nx 8 --nt 8").exit_code == 2);
    CHECK(run_cli("solve --problem nope --scheme I --beta 1.5 --nx 8 --nt 8").exit_code == 2);
    CHECK(run_cli("solve --problem example1 --scheme I --beta 0.7 --nx 8 --nt 8").exit_code == 2);
    CHECK(run_cli("solve --problem example1 --scheme I --beta 1.5 --nx 8").exit_code == 2);
    // advection-reaction problem demands a Scheme III variant
    CHECK(run_cli("solve --problem example2 --scheme I --beta 1.5 --nx 8 --nt 8").exit_code == 2);
    CHECK(run_cli("sweep --problem example1 --scheme I --beta 1.5 --axis time --levels 16 --nx 8")
              .exit_code == 2);
}

TEST_CASE("numerical-setup errors exit with code 3") {
    // beta within 1e-6 of 1: the starting-weight system degenerates
    auto r = run_cli("solve --problem example1 --scheme I --beta 1.0000001 --nx 8 --nt 8");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.out, "degenerate"));
}

TEST_CASE("diverged runs still exit 0") {
    auto r = run_cli("solve --problem example1 --scheme NG --beta 1.9 --nx 256 --nt 200");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "diverged  yes"));
}

TEST_CASE("sweep csv round-trips and matches an in-process rerun") {
    const std::string csv = "/tmp/fdwave_sweep.csv";
    auto r = run_cli("sweep --problem example1 --scheme I --beta 1.5 --axis time "
                     "--levels 8,16,32 --nx 32 --csv " + csv);
    REQUIRE(r.exit_code == 0);
    const auto rows = read_csv(csv);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].level == 8);
    CHECK_FALSE(rows[0].has_order);
    CHECK(rows[1].has_order);

    // rerun the same sweep through the library; %.17g round-trip is exact
    auto prob = fdwave::example1(1.5);
    for (const auto& row : rows) {
        auto H = fdwave::march(prob.spec, fdwave::Discretization(32, row.level),
                               fdwave::SchemeVariant::SchemeI);
        const double err = fdwave::error_summary(H, prob.exact).max_l2;
        CHECK(row.error == err);
    }
    // orders follow the log-ratio formula on the stored errors
    const double expect = std::log(rows[0].error / rows[1].error) / std::log(2.0);
    CHECK_THAT(rows[1].order, Catch::Matchers::WithinAbs(expect, 1e-12));
}

TEST_CASE("sweep metric final differs from max") {
    const std::string c1 = "/tmp/fdwave_m1.csv", c2 = "/tmp/fdwave_m2.csv";
    REQUIRE(run_cli("sweep --problem example1 --scheme II --beta 1.5 --axis time "
                    "--levels 8,16 --nx 32 --metric max --csv " + c1).exit_code == 0);
    REQUIRE(run_cli("sweep --problem example1 --scheme II --beta 1.5 --axis time "
                    "--levels 8,16 --nx 32 --metric final --csv " + c2).exit_code == 0);
    const auto a = read_csv(c1), b = read_csv(c2);
    CHECK(a[0].error >= b[0].error); // max dominates final
}

TEST_CASE("coupled sweep ties tau to h") {
    auto r = run_cli("sweep --problem example2 --scheme III2 --beta 1.5 --axis coupled "
                     "--levels 16,32 --metric final");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "coupled"));
}

TEST_CASE("json manifest") {
    const std::string path = "/tmp/fdwave_manifest.json";
    auto r = run_cli("solve --problem example1 --scheme II --beta 1.9 --nx 64 --nt 16 --json " +
                     path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    CHECK(j["command"] == "solve");
    CHECK(j["scheme"] == "II");
    CHECK(j["nx"] == 64);
    CHECK(j["results"]["diverged"] == false);
    CHECK(j["results"]["max_l2"].is_number());
}

TEST_CASE("stability subcommand") {
    auto bad = run_cli("stability --scheme NG --beta 1.5 --mu 1 --tau 0.005 --h 0.015625");
    CHECK(bad.exit_code == 0);
    CHECK(contains(bad.out, "1.0240"));
    CHECK(contains(bad.out, "Unstable"));

    auto good = run_cli("stability --scheme NG --beta 1.5 --mu 1 --tau 0.005 --h 0.03125");
    CHECK(good.exit_code == 0);
    CHECK(contains(good.out, "0.2560"));
    CHECK(contains(good.out, "verdict   Stable"));

    auto trap = run_cli("stability --scheme I --beta 1.5 --mu 1 --tau 0.1 --h 0.001");
    CHECK(trap.exit_code == 0);
    CHECK(contains(trap.out, "verdict   Stable"));
}
