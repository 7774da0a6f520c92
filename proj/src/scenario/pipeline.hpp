#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "domain/instance.hpp"
#include "model/builder.hpp"
#include "solver/milp.hpp"
#include "validator/plan.hpp"

namespace chargeplan {

enum class Outcome {
    Solved,              // plan found, replayed clean, costs reconciled
    Infeasible,
    LimitReached,        // limits hit with no plan
    InvalidScenario,
    VerificationFailed,  // solver answer failed the independent replay
    SolverFailure,
};

const char* to_string(Outcome outcome);

struct PipelineOptions {
    solver::SolverOptions solver;
    std::ostream* lp_dump = nullptr;
};

struct SolveResult {
    Outcome outcome = Outcome::SolverFailure;
    std::optional<Instance> instance;
    std::vector<Issue> issues;
    BuiltModel built;
    solver::Solution solution;
    PlanReport plan;
    ReplayResult verdict;
    std::string message;

    bool has_plan() const { return outcome == Outcome::Solved; }
    bool optimal() const { return has_plan() && solution.status == solver::SolveStatus::Optimal; }
};

/// validate -> build -> solve -> decode -> replay -> recompute. A plan is only
/// reported as Solved when the replay is clean and the recomputed total matches
/// the solver objective.
SolveResult solve_instance(const Instance& inst, const PipelineOptions& options = {});
SolveResult solve_scenario(const Scenario& scenario, const PipelineOptions& options = {});

/// 0 optimal, 1 infeasible or violations, 3 solver limit; see the CLI.
int exit_code(const SolveResult& result);

nlohmann::json result_to_json(const SolveResult& result);

}  // namespace chargeplan
