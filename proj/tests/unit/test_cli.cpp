#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "fixtures.hpp"
#include "schema_check.hpp"

using nlohmann::json;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run cli(const std::string& args) {
    const std::string cmd = std::string("'") + CHARGEPLAN_CLI + "' " + args + " > cli_out.txt 2> cli_err.txt";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp("cli_out.txt"), slurp("cli_err.txt")};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("chargeplan_unit_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("validate") {
    auto r = cli("validate --scenario " + fixture("depot.json"));
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["valid"] == true);

    const auto dir = scratch("validate");
    auto doc = json::parse(slurp(fixture("two_truck_day.json")));
    doc["legs"][1]["origin"] = "DEPOT_B";
    doc["locations"].push_back({{"id", "DEPOT_B"}, {"chargeable", true}});
    std::ofstream(dir / "broken.json") << doc.dump();
    r = cli("validate --scenario " + (dir / "broken.json").string());
    CHECK(r.code == 1);
    CHECK(r.out.find("ChainBroken") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and a JSON report") {
    for (const char* args : {"", "solve", "solve --scenario /no/such/file.json", "frobnicate",
                             "solve --scenario FIX --design hybrid", "solve --scenario FIX --gap -1",
                             "solve --scenario FIX --alpha 1,2", "sweep --scenario FIX --alpha 1",
                             "sweep --scenario FIX --slack-min 20 --out /tmp/chargeplan_unit_cli_bad",
                             "compare --scenario FIX", "solve --scenario FIX --tau-min 7"}) {
        std::string a = args;
        if (auto p = a.find("FIX"); p != std::string::npos) a.replace(p, 3, fixture("two_truck_day.json"));
        CAPTURE(a);
        const auto r = cli(a);
        CHECK(r.code == 2);
        CHECK_NOTHROW(json::parse(r.err.substr(0, r.err.find('\n'))).at("error").at("code"));
    }
}

TEST_CASE("solve writes a verified report") {
    const auto dir = scratch("solve");
    const auto r = cli("solve --scenario " + fixture("two_truck_day.json") + " --gap 0 --dump-lp --out " + dir.string());
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["exit_code"] == 0);
    const auto report = json::parse(slurp(dir / "report.json"));
    CHECK(report["outcome"] == "Solved");
    CHECK(report["objective"].get<double>() == doctest::Approx(91897.959).epsilon(1e-8));
    CHECK(SchemaChecker(CHARGEPLAN_SCHEMA_DIR).check("report.schema.json", report).empty());
    CHECK(fs::exists(dir / "power_curve.csv"));
    CHECK(fs::file_size(dir / "model.lp") > 0);
}

TEST_CASE("infeasible solve exits with 1") {
    const auto dir = scratch("infeasible");
    std::ofstream(dir / "none.json") << "{}";
    const auto r = cli("solve --scenario " + fixture("two_truck_day.json") + " --design fixed --fixed-file " +
                       (dir / "none.json").string());
    CHECK(r.code == 1);
    CHECK(json::parse(r.err.substr(0, r.err.find('\n')))["error"]["code"] == "Infeasible");
}

TEST_CASE("solver limit exits with 3") {
    const auto r = cli("solve --scenario " + fixture("depot.json") + " --gap 0 --node-limit 1");
    CHECK(r.code == 3);
    CHECK(r.err.find("solver_limit") != std::string::npos);
}

TEST_CASE("compare and generate") {
    const auto dir = scratch("compare");
    // The co-designed counts themselves: nothing to gain.
    std::ofstream(dir / "counts.json") << R"({"DEPOT": {"1": 2, "2": 1}})";
    auto r = cli("compare --scenario " + fixture("two_truck_day.json") + " --gap 0 --fixed-file " +
                 (dir / "counts.json").string() + " --out " + dir.string());
    CHECK(r.code == 0);
    const auto cmp = json::parse(slurp(dir / "comparison.json"));
    CHECK(cmp["feasible"]["fixed"] == true);
    CHECK(std::abs(cmp["deltas"]["total"].get<double>()) <= 1e-9);

    r = cli("compare --scenario " + fixture("two_truck_day.json") + " --policy main-depot-only:3:1");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["feasible"]["fixed"] == false);

    r = cli("generate --seed 14 --out " + (dir / "g.json").string());
    CHECK(r.code == 0);
    CHECK(json::parse(slurp(dir / "g.json")) == json::parse(slurp(fixture("depot.json"))));
}
