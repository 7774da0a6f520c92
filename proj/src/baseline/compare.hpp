#pragma once

#include <optional>

#include "baseline/policies.hpp"
#include "scenario/pipeline.hpp"

namespace chargeplan {

struct CostDeltas {
    // (fixed - codesign) / fixed; nullopt when the fixed component is zero.
    std::optional<double> total, energy, infrastructure, peak;
};

struct DesignComparison {
    ChargerCounts fixed_counts;
    SolveResult codesign;
    SolveResult fixed;
    bool codesign_feasible = false;
    bool fixed_feasible = false;
    std::optional<CostDeltas> deltas;  // only when both designs are feasible
    std::string finding;
};

/// Solve the scenario twice, once co-designed and once on `fixed_counts`, with the
/// same alpha, slack and solver settings. When `threads` > 1 the two solves run
/// concurrently.
DesignComparison compare_designs(const Instance& inst, const ChargerCounts& fixed_counts,
                                 const PipelineOptions& options = {}, int threads = 1);

nlohmann::json comparison_to_json(const DesignComparison& cmp);

/// 0 when both solved to optimality (or fixed proven infeasible), 3 on limits.
int exit_code(const DesignComparison& cmp);

}  // namespace chargeplan
