#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cft3m/cli.hpp"

using namespace cft3m;
using nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_command(const RunConfig& config) {
    std::ostringstream out, err;
    const int code = run(config, out, err);
    return {code, out.str(), err.str()};
}

std::string data_path(const std::string& name) {
    return std::string(CFT3M_DATA_DIR "/") + name;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/cft3m_test_" + name;
    std::ofstream f(path, std::ios::trunc);
    f << text;
    return path;
}

} // namespace

TEST_CASE("splitting command on the hopf probe knot") {
    RunConfig config;
    config.command = Command::splitting;
    config.input_path = data_path("hopf.json");
    config.knot = "K3";
    const auto result = run_command(config);
    CHECK(result.exit_code == 0);
    CHECK(result.out == "e=1 f=2 r=2 n=4\nresidues: 1 mod 2, 0 mod 2\n");
}

TEST_CASE("splitting json output carries the full tuple") {
    RunConfig config;
    config.command = Command::splitting;
    config.input_path = data_path("hopf.json");
    config.knot = "K1";
    config.format = OutputFormat::json;
    const auto result = run_command(config);
    CHECK(result.exit_code == 0);
    const auto j = ordered_json::parse(result.out);
    CHECK(j["branched"] == true);
    CHECK(j["e"] == 2);
    CHECK(j["f"] == 2);
    CHECK(j["r"] == 1);
    CHECK(j["n"] == 4);
}

TEST_CASE("splitting rejects unknown knots with exit 2") {
    RunConfig config;
    config.command = Command::splitting;
    config.input_path = data_path("hopf.json");
    config.knot = "K9";
    const auto result = run_command(config);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("UNKNOWN_KNOT") != std::string::npos);
}

TEST_CASE("local command text and json") {
    RunConfig config;
    config.command = Command::local;
    config.subgroup = "1,0;0,4";
    auto result = run_command(config);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("e=1 f=4") != std::string::npos);
    CHECK(result.out.find("deck=Z/4") != std::string::npos);

    config.format = OutputFormat::json;
    result = run_command(config);
    const auto j = ordered_json::parse(result.out);
    CHECK(j["e"] == 1);
    CHECK(j["f"] == 4);
    CHECK(j["deck"] == ordered_json::array({4}));
    CHECK(j["unramified"] == true);

    config.subgroup = "2,0";
    result = run_command(config);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("INFINITE_INDEX") != std::string::npos);

    config.subgroup = "1,2;x,4";
    result = run_command(config);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("MALFORMED_INPUT") != std::string::npos);
}

TEST_CASE("verify passes on every shipped link file") {
    for (const char* name :
         {"hopf.json", "unknot3.json", "chain3.json", "torus-2-6.json"}) {
        RunConfig config;
        config.command = Command::verify;
        config.input_path = data_path(name);
        const auto result = run_command(config);
        CHECK(result.exit_code == 0);
        const auto arr = ordered_json::parse(result.out);
        REQUIRE(arr.is_array());
        CHECK(arr.size() == 4);
        for (const auto& entry : arr) CHECK(entry["pass"] == true);
    }
}

TEST_CASE("verify reports the example quotient factors") {
    RunConfig config;
    config.command = Command::verify;
    config.input_path = data_path("hopf.json");
    config.theorems = {"5.9"};
    const auto result = run_command(config);
    CHECK(result.exit_code == 0);
    const auto arr = ordered_json::parse(result.out);
    REQUIRE(arr.size() == 1);
    CHECK(arr[0]["theorem"] == "5.9");
    CHECK(arr[0]["lhs_factors"] == ordered_json::array({2, 2}));
    CHECK(arr[0]["rhs_factors"] == ordered_json::array({2, 2}));
}

TEST_CASE("verify emits byte-stable round-trippable json") {
    RunConfig config;
    config.command = Command::verify;
    config.input_path = data_path("chain3.json");
    const auto first = run_command(config);
    const auto second = run_command(config);
    CHECK(first.out == second.out);

    const auto parsed = ordered_json::parse(first.out);
    CHECK(parsed.dump() + "\n" == first.out);
}

TEST_CASE("verify exits 2 on schema violations") {
    const auto path = write_temp(
        "corrupt.json", R"({"knots": ["K1"], "linking": [[0, 7]]})");
    RunConfig config;
    config.command = Command::verify;
    config.input_path = path;
    const auto result = run_command(config);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("/linking") != std::string::npos);

    config.input_path = "/nonexistent/file.json";
    CHECK(run_command(config).exit_code == 2);
}

TEST_CASE("verify exits 1 when a covering check fails") {
    // entangled images over a bare truncation: reciprocity quotient
    // overshoots, which verify must report as a violation
    const auto path = write_temp("entangled.json", R"({
        "knots": ["K1", "K2"],
        "linking": [[0, 0], [0, 0]],
        "covering": {
            "branch": ["K1", "K2"],
            "target": [2],
            "meridian_images": {"K1": [1], "K2": [1]}
        }
    })");
    RunConfig config;
    config.command = Command::verify;
    config.input_path = path;
    config.theorems = {"5.9"};
    const auto result = run_command(config);
    CHECK(result.exit_code == 1);
    const auto arr = ordered_json::parse(result.out);
    CHECK(arr[0]["pass"] == false);
    CHECK(arr[0]["lhs_factors"] == ordered_json::array({2, 2}));
    CHECK(arr[0]["rhs_factors"] == ordered_json::array({2}));
}

TEST_CASE("verify without a covering runs the split check only") {
    const auto path = write_temp(
        "nocover.json", R"({"knots": ["K1", "K2"],
                            "linking": [[0, 3], [3, 0]]})");
    RunConfig config;
    config.command = Command::verify;
    config.input_path = path;
    const auto result = run_command(config);
    CHECK(result.exit_code == 0);
    const auto arr = ordered_json::parse(result.out);
    REQUIRE(arr.size() == 1);
    CHECK(arr[0]["theorem"] == "5.8");

    config.theorems = {"5.9"};
    CHECK(run_command(config).exit_code == 2);
}

TEST_CASE("report emits the full instance summary") {
    RunConfig config;
    config.command = Command::report;
    config.input_path = data_path("torus-2-6.json");
    const auto result = run_command(config);
    CHECK(result.exit_code == 0);
    const auto j = ordered_json::parse(result.out);
    CHECK(j["pass"] == true);
    CHECK(j["covering"]["group"] == ordered_json::array({6, 6}));
    CHECK(j["reciprocity"]["pass"] == true);
    CHECK(j["splitting"].size() == 3);
    CHECK(j["unit_principal_cokernel"] == ordered_json::array());
    CHECK(j.dump(2) + "\n" == result.out);
}

TEST_CASE("report works on covering-free files") {
    const auto path = write_temp(
        "plain.json", R"({"knots": ["K1"], "linking": [[0]]})");
    RunConfig config;
    config.command = Command::report;
    config.input_path = path;
    const auto result = run_command(config);
    CHECK(result.exit_code == 0);
    const auto j = ordered_json::parse(result.out);
    CHECK(j["pass"] == true);
    CHECK_FALSE(j.contains("covering"));
}

TEST_CASE("selftest stream is deterministic and round-trippable") {
    RunConfig config;
    config.command = Command::selftest;
    config.seed = 7;
    config.cases = 12;
    const auto first = run_command(config);
    const auto second = run_command(config);
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);

    std::istringstream lines(first.out);
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        const auto j = ordered_json::parse(line);
        CHECK(j.dump() == line);
        CHECK(j["pass"] == true);
        ++count;
    }
    CHECK(count == 12);
}

TEST_CASE("selftest requires at least one case") {
    RunConfig config;
    config.command = Command::selftest;
    config.cases = 0;
    const auto result = run_command(config);
    CHECK(result.exit_code == 2);
}

TEST_CASE("environment variable overrides the default seed") {
    CHECK(default_seed() == kDefaultSeed);
    setenv("CFT3M_SEED", "99", 1);
    CHECK(default_seed() == 99);
    setenv("CFT3M_SEED", "not-a-number", 1);
    CHECK_THROWS_AS(default_seed(), Error);
    unsetenv("CFT3M_SEED");
    CHECK(default_seed() == kDefaultSeed);
}
