#include "baseline/compare.hpp"

#include <future>

#include "domain/scenario_json.hpp"

namespace chargeplan {

namespace {

SolveResult solve_variant(const Instance& inst, DesignMode mode, const ChargerCounts& counts,
                          const PipelineOptions& options) {
    Scenario s = inst.scenario();
    s.params.design_mode = mode;
    if (mode == DesignMode::FixedInfrastructure) s.params.fixed_counts = counts;
    return solve_scenario(s, options);
}

std::optional<double> relative_saving(double fixed, double codesign) {
    if (fixed == 0.0) return codesign == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    return (fixed - codesign) / fixed;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

DesignComparison compare_designs(const Instance& inst, const ChargerCounts& fixed_counts,
                                 const PipelineOptions& options, int threads) {
    DesignComparison cmp;
    cmp.fixed_counts = fixed_counts;
    // The dump stream is not shared between threads.
    PipelineOptions quiet = options;
    quiet.lp_dump = nullptr;
    if (threads > 1) {
        auto fixed = std::async(std::launch::async, solve_variant, std::cref(inst), DesignMode::FixedInfrastructure,
                                std::cref(fixed_counts), std::cref(quiet));
        cmp.codesign = solve_variant(inst, DesignMode::CoDesign, fixed_counts, options);
        cmp.fixed = fixed.get();
    } else {
        cmp.codesign = solve_variant(inst, DesignMode::CoDesign, fixed_counts, options);
        cmp.fixed = solve_variant(inst, DesignMode::FixedInfrastructure, fixed_counts, quiet);
    }
    cmp.codesign_feasible = cmp.codesign.has_plan();
    cmp.fixed_feasible = cmp.fixed.has_plan();

    if (cmp.codesign_feasible && cmp.fixed_feasible) {
        const auto& f = cmp.fixed.plan.costs;
        const auto& c = cmp.codesign.plan.costs;
        cmp.deltas = CostDeltas{relative_saving(f.total, c.total), relative_saving(f.energy, c.energy),
                                relative_saving(f.infrastructure, c.infrastructure), relative_saving(f.peak, c.peak)};
        cmp.finding = "both designs feasible";
    } else if (cmp.codesign_feasible && cmp.fixed.outcome == Outcome::Infeasible) {
        cmp.finding = "the itineraries cannot be served by the fixed infrastructure; co-design finds a feasible plan";
    } else if (!cmp.codesign_feasible && cmp.codesign.outcome == Outcome::Infeasible) {
        cmp.finding = "the itineraries are infeasible under any infrastructure";
    } else {
        cmp.finding = "comparison incomplete: codesign " + std::string(to_string(cmp.codesign.outcome)) + ", fixed " +
                      to_string(cmp.fixed.outcome);
    }
    return cmp;
}

nlohmann::json comparison_to_json(const DesignComparison& cmp) {
    nlohmann::json j;
    j["fixed_counts"] = charger_counts_to_json(cmp.fixed_counts);
    j["codesign"] = result_to_json(cmp.codesign);
    j["fixed"] = result_to_json(cmp.fixed);
    j["feasible"] = {{"codesign", cmp.codesign_feasible}, {"fixed", cmp.fixed_feasible}};
    if (cmp.deltas)
        j["deltas"] = {{"total", opt(cmp.deltas->total)},
                       {"energy", opt(cmp.deltas->energy)},
                       {"infrastructure", opt(cmp.deltas->infrastructure)},
                       {"peak", opt(cmp.deltas->peak)}};
    else
        j["deltas"] = nullptr;
    j["finding"] = cmp.finding;
    return j;
}

int exit_code(const DesignComparison& cmp) {
    const int a = exit_code(cmp.codesign), b = exit_code(cmp.fixed);
    if (a == 3 || b == 3) return 3;
    if (a != 0) return a;
    // A fixed design shown to be infeasible is a finding, not a failure.
    return b == 0 || cmp.fixed.outcome == Outcome::Infeasible ? 0 : b;
}

}  // namespace chargeplan
