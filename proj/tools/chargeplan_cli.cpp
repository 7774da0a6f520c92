// chargeplan command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chargeplan/chargeplan.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int report_error(int code, const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", {{"code", kind}, {"message", message}}}}.dump() << "\n";
    return code;
}

// Error from the library: its own report is already JSON.
int library_error(chp_status status) {
    std::string err = chp_last_error();
    if (err.empty()) err = json{{"error", {{"code", "unknown"}, {"message", "call failed"}}}}.dump();
    std::cerr << err << "\n";
    return static_cast<int>(status) > 3 ? 1 : static_cast<int>(status);
}

std::string take(char* s) {
    std::string out = s ? s : "";
    chp_string_free(s);
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const std::string& flag) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) {
        std::istringstream in(item);
        T v;
        if (!(in >> v) || !in.eof()) throw CLI::ValidationError(flag, "bad list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError(flag, "empty list");
    return out;
}

struct ScenarioHandle {
    chp_scenario* p = nullptr;
    ~ScenarioHandle() { chp_scenario_free(p); }
};

struct Common {
    std::string scenario;
    std::string alpha;
    std::string slack;
    std::string design;
    std::string fixed_file;
    std::string policy;
    double gap = 0.01;
    int tau = 0;
    std::string out;
    int threads = 1;
    bool dump_lp = false;
    double time_limit = 3600.0;
    long node_limit = 1000000;
    bool trace = false;
};

// Load the scenario and apply --tau-min. Returns nonzero exit code on failure.
int load(const Common& c, ScenarioHandle& h) {
    if (auto st = chp_scenario_load(c.scenario.c_str(), &h.p); st != CHP_OK) return library_error(st);
    if (c.tau > 0)
        if (auto st = chp_scenario_set_block_minutes(h.p, c.tau); st != CHP_OK) return library_error(st);
    return 0;
}

json solver_json(const Common& c) {
    return {{"gap", c.gap}, {"time_limit_s", c.time_limit}, {"node_limit", c.node_limit}, {"trace", c.trace}};
}

json fixed_counts(const Common& c) {
    std::ifstream in(c.fixed_file);
    if (!in) throw CLI::ValidationError("--fixed-file", "cannot read " + c.fixed_file);
    return json::parse(in);
}

int cmd_validate(const Common& c) {
    ScenarioHandle h;
    if (int rc = load(c, h)) return rc;
    char* report = nullptr;
    auto st = chp_scenario_validate(h.p, &report);
    if (st != CHP_OK && st != CHP_INFEASIBLE) return library_error(st);
    std::cout << take(report);
    return st;
}

int cmd_solve(const Common& c) {
    ScenarioHandle h;
    if (int rc = load(c, h)) return rc;
    json o = solver_json(c);
    if (!c.alpha.empty()) {
        auto a = parse_list<double>(c.alpha, "--alpha");
        if (a.size() != 1) throw CLI::ValidationError("--alpha", "solve takes one value; use sweep for lists");
        o["alpha"] = a[0];
    }
    if (!c.slack.empty()) {
        auto s = parse_list<int>(c.slack, "--slack-min");
        if (s.size() != 1) throw CLI::ValidationError("--slack-min", "solve takes one value; use sweep for lists");
        o["slack_minutes"] = s[0];
    }
    if (!c.design.empty()) o["design"] = c.design;
    if (!c.fixed_file.empty()) o["fixed_counts"] = fixed_counts(c);

    chp_result* r = nullptr;
    auto st = chp_solve(h.p, o.dump().c_str(), &r);
    if (!r) return library_error(st);
    std::unique_ptr<chp_result, void (*)(chp_result*)> guard(r, chp_result_free);
    char* text = nullptr;
    chp_result_report(r, &text);
    const std::string report = take(text);

    if (c.out.empty()) {
        std::cout << report;
    } else {
        const fs::path dir(c.out);
        write_text(dir / "report.json", report);
        char* csv = nullptr;
        if (chp_result_power_csv(r, &csv) == CHP_OK) write_text(dir / "power_curve.csv", take(csv));
        std::cout << json{{"report", (dir / "report.json").string()}, {"exit_code", static_cast<int>(st)}}.dump()
                  << "\n";
    }
    if (c.dump_lp) {
        char* lp = nullptr;
        chp_result_lp(r, &lp);
        write_text(fs::path(c.out.empty() ? "." : c.out) / "model.lp", take(lp));
    }
    if (st == CHP_INTERNAL) return report_error(1, "verification", "solver result failed independent replay");
    if (st != CHP_OK) {
        const auto j = json::parse(report);
        std::string code = j.value("outcome", "unknown");
        std::string message = j.value("message", "");
        if (st == CHP_LIMIT) {
            code = "solver_limit";
            if (message.empty()) message = "limit reached before the gap target was proven";
        }
        std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
    }
    return st;
}

int cmd_sweep(const Common& c) {
    ScenarioHandle h;
    if (int rc = load(c, h)) return rc;
    if (c.out.empty()) throw CLI::ValidationError("--out", "sweep needs an output directory");
    json o = solver_json(c);
    if (!c.alpha.empty()) o["alphas"] = parse_list<double>(c.alpha, "--alpha");
    if (!c.slack.empty()) o["slack_minutes"] = parse_list<int>(c.slack, "--slack-min");
    if (!c.design.empty()) o["designs"] = split_list(c.design);
    if (!c.fixed_file.empty()) o["fixed_counts"] = fixed_counts(c);
    if (!c.policy.empty()) o["policy"] = c.policy;
    o["threads"] = c.threads;
    o["out_dir"] = c.out;
    char* summary = nullptr;
    auto st = chp_sweep(h.p, o.dump().c_str(), &summary);
    if (!summary) return library_error(st);
    std::cout << take(summary);
    return st;
}

int cmd_compare(const Common& c) {
    ScenarioHandle h;
    if (int rc = load(c, h)) return rc;
    json o = solver_json(c);
    if (!c.alpha.empty()) o["alpha"] = parse_list<double>(c.alpha, "--alpha").front();
    if (!c.slack.empty()) o["slack_minutes"] = parse_list<int>(c.slack, "--slack-min").front();
    o["threads"] = c.threads;
    std::string policy = c.policy;
    if (policy.empty() && !c.fixed_file.empty()) policy = "explicit:" + c.fixed_file;
    if (policy.empty()) throw CLI::ValidationError("--policy", "compare needs --policy or --fixed-file");
    char* report = nullptr;
    auto st = chp_compare(h.p, policy.c_str(), o.dump().c_str(), &report);
    if (!report) return library_error(st);
    const std::string text = take(report);
    if (c.out.empty()) std::cout << text;
    else write_text(fs::path(c.out) / "comparison.json", text);
    return st == CHP_INTERNAL ? 1 : st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Charging infrastructure and schedule co-design"};
    app.require_subcommand(1);
    Common c;

    auto add_scenario = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", c.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--tau-min", c.tau, "Override the block length in minutes");
    };
    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--gap", c.gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
        cmd->add_option("--time-limit", c.time_limit, "Seconds per solve");
        cmd->add_option("--node-limit", c.node_limit, "Branch-and-bound nodes per solve");
        cmd->add_flag("--trace", c.trace, "Node log on stderr");
        cmd->add_option("--alpha", c.alpha, "Peak factor(s), comma separated");
        cmd->add_option("--slack-min", c.slack, "Time slack(s) in minutes, comma separated");
        cmd->add_option("--out", c.out, "Output directory");
        cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    add_scenario(validate);

    auto* solve = app.add_subcommand("solve", "Solve one scenario and write the verified plan");
    add_scenario(solve);
    add_solver(solve);
    solve->add_option("--design", c.design, "codesign or fixed")->check(CLI::IsMember({"codesign", "fixed"}));
    solve->add_option("--fixed-file", c.fixed_file, "Charger counts for fixed design")->check(CLI::ExistingFile);
    solve->add_flag("--dump-lp", c.dump_lp, "Write model.lp");

    auto* sweep = app.add_subcommand("sweep", "Full factorial alpha x slack x design sweep");
    add_scenario(sweep);
    add_solver(sweep);
    sweep->add_option("--design", c.design, "codesign, fixed, or both comma separated");
    sweep->add_option("--fixed-file", c.fixed_file, "Charger counts for fixed cells")->check(CLI::ExistingFile);
    sweep->add_option("--policy", c.policy, "Rule-based design for fixed cells");

    auto* compare = app.add_subcommand("compare", "Co-design against a rule-based design");
    add_scenario(compare);
    add_solver(compare);
    compare->add_option("--policy", c.policy, "main-depot-only:N:TYPE | peak-demand-cover:TYPE | explicit:PATH");
    compare->add_option("--fixed-file", c.fixed_file, "Charger counts (same as explicit:PATH)");

    auto* generate = app.add_subcommand("generate", "Write a synthetic depot scenario");
    std::uint64_t seed = 1;
    int trucks = 3, locations = 5, days = 2;
    double tightness = 0.5;
    std::string out_file;
    generate->add_option("--seed", seed, "Random seed");
    generate->add_option("--trucks", trucks)->check(CLI::PositiveNumber);
    generate->add_option("--locations", locations)->check(CLI::Range(2, 1000));
    generate->add_option("--days", days)->check(CLI::PositiveNumber);
    generate->add_option("--tightness", tightness)->check(CLI::Range(0.0, 1.0));
    generate->add_option("--tau-min", c.tau, "Block length in minutes");
    generate->add_option("--out", out_file, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(2, "usage", e.what());
    }

    try {
        if (*validate) return cmd_validate(c);
        if (*solve) return cmd_solve(c);
        if (*sweep) return cmd_sweep(c);
        if (*compare) return cmd_compare(c);
        if (*generate) {
            ScenarioHandle h;
            if (auto st = chp_scenario_generate(seed, trucks, locations, days, tightness, &h.p); st != CHP_OK)
                return library_error(st);
            if (c.tau > 0)
                if (auto st = chp_scenario_set_block_minutes(h.p, c.tau); st != CHP_OK) return library_error(st);
            char* text = nullptr;
            if (auto st = chp_scenario_to_json(h.p, &text); st != CHP_OK) return library_error(st);
            if (out_file.empty()) std::cout << take(text);
            else write_text(out_file, take(text));
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return report_error(2, "usage", e.what());
    } catch (const json::exception& e) {
        return report_error(2, "usage", e.what());
    } catch (const std::exception& e) {
        return report_error(2, "io", e.what());
    }
    return 2;
}
