// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "baseline/compare.hpp"
#include "baseline/policies.hpp"
#include "fixtures.hpp"
#include "random_models.hpp"
#include "scenario/pipeline.hpp"
#include "schema_check.hpp"
#include "solver/milp.hpp"

using namespace chargeplan;
using namespace testsupport;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (!pass) detail << "; ";
        else detail.str("");
        pass = false;
        detail << why;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Absolute slack allowed by a solve's reported relative gap.
double gap_slack(const SolveResult& r) { return r.solution.gap * std::abs(r.solution.objective); }

double sum_peak_columns(const SolveResult& r) {
    double s = 0.0;
    for (int col : r.built.catalog.peak)
        if (col >= 0) s += r.solution.values[col];
    return s;
}

double installed_kw(const SolveResult& r) {
    double kw = 0.0;
    for (std::size_t i = 0; i < r.plan.charger_counts.size(); ++i)
        for (std::size_t t = 0; t < r.plan.charger_counts[i].size(); ++t)
            kw += r.plan.charger_counts[i][t] * r.instance->charger(static_cast<int>(t)).rated_power_kw;
    return kw;
}

// Every Optimal solve with alpha > 0 is kept for the epigraph check.
std::vector<SolveResult> g_optimal_solves;

SolveResult solve_kept(const Scenario& s, double gap) {
    PipelineOptions o;
    o.solver.rel_gap = gap;
    auto r = solve_scenario(s, o);
    if (r.optimal() && s.params.alpha > 0.0) g_optimal_solves.push_back(r);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict solver_exactness() {
    Verdict v;
    double bb_seconds = 0.0;
    int feasible = 0;
    for (std::uint64_t seed = 1001; seed <= 1050; ++seed) {
        const auto m = random_milp(seed, 12, 10);
        const auto t0 = Clock::now();
        const auto bb = solver::branch_and_bound(m, {.rel_gap = 0.0});
        bb_seconds += seconds_since(t0);
        const auto bf = solver::brute_force_enumerate(m);
        if (bb.status != bf.status) {
            v.fail("seed " + std::to_string(seed) + ": status " + solver::to_string(bb.status) + " vs " +
                   solver::to_string(bf.status));
            continue;
        }
        if (bf.status != solver::SolveStatus::Optimal) continue;
        ++feasible;
        if (std::abs(bb.objective - bf.objective) > 1e-6)
            v.fail("seed " + std::to_string(seed) + ": " + fmt(bb.objective) + " vs " + fmt(bf.objective));
    }
    if (bb_seconds >= 5.0) v.fail("branch and bound took " + fmt(bb_seconds) + " s");
    if (v.pass) v.detail << "50 models (" << feasible << " feasible) agree, B&B " << fmt(bb_seconds) << " s";
    return v;
}

Verdict end_to_end(const Scenario& depot) {
    Verdict v;
    const auto t0 = Clock::now();
    const auto r = solve_kept(depot, 0.01);
    const double secs = seconds_since(t0);
    if (!r.instance || r.solution.status != solver::SolveStatus::Optimal) {
        v.fail("status " + std::string(to_string(r.outcome)) + ": " + r.message);
        return v;
    }
    const auto replayed = replay(*r.instance, r.plan);
    if (!replayed.clean()) v.fail(std::to_string(replayed.violations.size()) + " replay violations");
    const double total = recompute_costs(*r.instance, r.plan).total;
    if (std::abs(total - r.solution.objective) > 1e-6)
        v.fail("recomputed " + fmt(total) + " vs objective " + fmt(r.solution.objective));
    if (secs >= 60.0) v.fail("solve took " + fmt(secs) + " s");
    if (v.pass)
        v.detail << "objective " << fmt(r.solution.objective) << ", gap " << fmt(r.solution.gap) << ", " << fmt(secs)
                 << " s, replay Clean";
    return v;
}

Verdict restriction_dominance(const Scenario& depot, const ChargerCounts& fixed_counts) {
    Verdict v;
    int compared = 0;
    for (double alpha : {1.0, 2.0})
        for (int slack : {15, 30}) {
            Scenario s = depot;
            s.params.alpha = alpha;
            s.params.slack_minutes = slack;
            const auto co = solve_kept(s, 0.01);
            s.params.design_mode = DesignMode::FixedInfrastructure;
            s.params.fixed_counts = fixed_counts;
            const auto fx = solve_kept(s, 0.01);
            const std::string cell = "alpha " + fmt(alpha) + " slack " + std::to_string(slack);
            if (fx.outcome == Outcome::Infeasible) continue;
            if (!co.optimal() || !fx.optimal()) {
                v.fail(cell + ": not solved to the gap target");
                continue;
            }
            ++compared;
            const double bound = fx.solution.objective + gap_slack(co) + gap_slack(fx);
            if (co.solution.objective > bound)
                v.fail(cell + ": co-design " + fmt(co.solution.objective) + " > fixed " + fmt(fx.solution.objective));
        }
    if (v.pass) v.detail << compared << " of 4 cells had a feasible fixed design; co-design never worse";
    return v;
}

Verdict slack_monotonicity(const Scenario& depot) {
    Verdict v;
    std::vector<SolveResult> runs;
    for (int blocks : {0, 1, 2, 4}) {
        Scenario s = depot;
        s.params.slack_minutes = blocks * s.time_grid.block_minutes;
        runs.push_back(solve_kept(s, 1e-4));
        if (!runs.back().optimal()) v.fail(std::to_string(blocks) + " blocks: not solved");
    }
    if (!v.pass) return v;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        const double allowed = runs[k - 1].solution.objective + gap_slack(runs[k - 1]) + gap_slack(runs[k]);
        if (runs[k].solution.objective > allowed)
            v.fail("objective rose from " + fmt(runs[k - 1].solution.objective) + " to " + fmt(runs[k].solution.objective));
    }
    if (v.pass) {
        v.detail << "objectives";
        for (const auto& r : runs) v.detail << ' ' << fmt(r.solution.objective);
    }
    return v;
}

Verdict alpha_trends(const Scenario& depot) {
    Verdict v;
    const std::vector<double> alphas{0.5, 1.0, 2.0, 4.0};
    std::vector<SolveResult> runs;
    for (double a : alphas) {
        Scenario s = depot;
        s.params.alpha = a;
        runs.push_back(solve_kept(s, 1e-4));
        if (!runs.back().optimal()) v.fail("alpha " + fmt(a) + ": not solved");
    }
    if (!v.pass) return v;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        const double slack = gap_slack(runs[k - 1]) + gap_slack(runs[k]);
        const std::string step = "alpha " + fmt(alphas[k - 1]) + " -> " + fmt(alphas[k]);
        // The peak columns are unweighted; the gap is in weighted units, so scale back.
        if (sum_peak_columns(runs[k]) > sum_peak_columns(runs[k - 1]) + slack / alphas[k - 1] + 1e-6)
            v.fail(step + ": peak cost rose");
        if (runs[k].solution.objective < runs[k - 1].solution.objective - slack) v.fail(step + ": total fell");
        if (installed_kw(runs[k]) > installed_kw(runs[k - 1]) + 1e-9) v.fail(step + ": installed power rose");
    }
    if (v.pass) {
        v.detail << "peak/total/kW:";
        for (const auto& r : runs)
            v.detail << ' ' << fmt(sum_peak_columns(r)) << '/' << fmt(r.solution.objective) << '/' << fmt(installed_kw(r));
    }
    return v;
}

Verdict epigraph_tightness() {
    Verdict v;
    int checked = 0;
    for (const auto& r : g_optimal_solves) {
        const Instance& inst = *r.instance;
        const auto costs = recompute_costs(inst, r.plan);
        for (int i = 0; i < inst.num_locations(); ++i) {
            const int col = r.built.catalog.peak[i];
            if (col < 0) continue;
            ++checked;
            const double expected = inst.scenario().prices.peak_price_per_kw * costs.peak_kw[i];
            if (std::abs(r.solution.values[col] - expected) > 1e-6)
                v.fail(inst.location(i).id + ": C_peak " + fmt(r.solution.values[col]) + " vs " + fmt(expected));
        }
    }
    if (checked == 0) v.fail("no optimal solves with a peak term");
    if (v.pass) v.detail << checked << " location peaks over " << g_optimal_solves.size() << " optimal solves";
    return v;
}

Verdict infeasibility_finding() {
    Verdict v;
    const Scenario remote = load_scenario_file(fixture("depot_remote.json"));
    auto valid = validate_scenario(remote);
    if (!valid.ok()) {
        v.fail("remote fixture invalid");
        return v;
    }
    const auto counts = rule_based_design(*valid.instance, MainDepotOnly{4, 2});
    const int block = remote.time_grid.block_minutes;
    int first_feasible = -1;
    for (int blocks : {1, 2}) {
        Scenario s = remote;
        s.params.slack_minutes = blocks * block;
        const auto cmp = compare_designs(*validate_scenario(s).instance, counts);
        if (!cmp.codesign_feasible) v.fail(std::to_string(blocks) + " blocks: co-design infeasible");
        if (blocks == 1 && cmp.fixed.outcome != Outcome::Infeasible) v.fail("depot-only design feasible at 1 block");
        if (blocks == 1 && v.pass) v.detail << "1 block: " << cmp.finding << "; ";
        if (cmp.fixed_feasible && first_feasible < 0) first_feasible = blocks;
    }
    if (first_feasible != 2) v.fail("depot-only design not feasible at 2 blocks");
    if (v.pass) v.detail << "2 blocks: both feasible";
    return v;
}

Verdict sweep_determinism() {
    Verdict v;
    const fs::path root = fs::temp_directory_path() / "chargeplan_acceptance_sweep";
    fs::remove_all(root);
    for (const char* run : {"first", "second"}) {
        const std::string cmd = std::string("'") + CHARGEPLAN_CLI + "' sweep --scenario '" + fixture("depot.json") +
                                "' --alpha 1,2 --slack-min 15,30 --design codesign,fixed --policy main-depot-only:2:2"
                                " --threads 1 --out '" + (root / run).string() + "' > /dev/null";
        const int raw = std::system(cmd.c_str());
        if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) v.fail(std::string(run) + " sweep exited abnormally");
    }
    for (const char* f : {"infrastructure.csv", "costs.csv", "power_curves.csv"}) {
        const auto a = slurp(root / "first" / f), b = slurp(root / "second" / f);
        if (a.empty()) v.fail(std::string(f) + " missing");
        else if (a != b) v.fail(std::string(f) + " differs");
    }
    if (v.pass) v.detail << "3 CSVs byte-identical over 8 cells";
    fs::remove_all(root);
    return v;
}

Verdict format_round_trip() {
    Verdict v;
    const SchemaChecker schemas(CHARGEPLAN_SCHEMA_DIR);
    for (const char* name : {"depot.json", "depot_remote.json", "two_truck_day.json"}) {
        const Scenario a = load_scenario_file(fixture(name));
        const Scenario b = scenario_from_json(nlohmann::json::parse(scenario_to_json(a).dump()));
        auto va = validate_scenario(a), vb = validate_scenario(b);
        if (!(a == b) || !va.ok() || !vb.ok() || !(va.instance->scenario() == vb.instance->scenario()))
            v.fail(std::string(name) + " round trip changed the scenario");
        for (const auto& e : schemas.check("scenario.schema.json", read_json_file(fixture(name))))
            v.fail(std::string(name) + ": " + e);
    }
    for (const auto& e : schemas.check("fixed_counts.schema.json", read_json_file(fixture("depot_fixed_counts.json"))))
        v.fail("depot_fixed_counts.json: " + e);
    const auto report = solve_scenario(load_scenario_file(fixture("two_truck_day.json")));
    for (const auto& e : schemas.check("report.schema.json", result_to_json(report))) v.fail("report: " + e);
    if (v.pass) v.detail << "3 scenarios round trip; 3 schemas validate fixtures and a report";
    return v;
}

}  // namespace

int main() {
    const Scenario depot = load_scenario_file(fixture("depot.json"));
    const ChargerCounts fixed_counts = load_charger_counts_file(fixture("depot_fixed_counts.json"));

    // Criterion 3 uses the optimal solves of 2, 4, 5 and 6, so it is evaluated last.
    std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
        {1, solver_exactness},
        {2, [&] { return end_to_end(depot); }},
        {4, [&] { return restriction_dominance(depot, fixed_counts); }},
        {5, [&] { return slack_monotonicity(depot); }},
        {6, [&] { return alpha_trends(depot); }},
        {3, epigraph_tightness},
        {7, infeasibility_finding},
        {8, sweep_determinism},
        {9, format_round_trip},
    };
    std::vector<std::pair<int, std::string>> lines;
    bool all = true;
    for (auto& [n, run] : criteria) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        all = all && v.pass;
        std::ostringstream line;
        line << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << " (" << fmt(seconds_since(t0)) << " s) "
             << v.detail.str();
        std::cerr << line.str() << std::endl;
        lines.emplace_back(n, line.str());
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [n, line] : lines) std::cout << line << "\n";
    std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
    return all ? 0 : 1;
}
