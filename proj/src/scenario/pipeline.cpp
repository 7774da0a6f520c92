#include "scenario/pipeline.hpp"

#include <cmath>

namespace chargeplan {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Solved: return "Solved";
        case Outcome::Infeasible: return "Infeasible";
        case Outcome::LimitReached: return "LimitReached";
        case Outcome::InvalidScenario: return "InvalidScenario";
        case Outcome::VerificationFailed: return "VerificationFailed";
        case Outcome::SolverFailure: return "SolverFailure";
    }
    return "?";
}

SolveResult solve_instance(const Instance& inst, const PipelineOptions& options) {
    using solver::SolveStatus;
    SolveResult res;
    res.instance = inst;
    res.built = build_problem(inst);
    if (options.lp_dump) write_lp_format(res.built.model, *options.lp_dump);

    res.solution = solver::branch_and_bound(res.built.model, options.solver);
    res.plan = decode_plan(inst, res.built, res.solution);
    switch (res.solution.status) {
        case SolveStatus::Optimal:
        case SolveStatus::Feasible: break;
        case SolveStatus::Infeasible:
            res.outcome = Outcome::Infeasible;
            res.message = "no charging schedule satisfies the scenario";
            return res;
        case SolveStatus::LimitReached:
            res.outcome = Outcome::LimitReached;
            res.message = "solver limits reached before a feasible plan was found";
            return res;
        default:
            res.outcome = Outcome::SolverFailure;
            res.message = std::string("solver returned ") + solver::to_string(res.solution.status);
            return res;
    }

    res.verdict = replay(inst, res.plan);
    res.plan.costs = recompute_costs(inst, res.plan);
    if (!res.verdict.clean()) {
        res.outcome = Outcome::VerificationFailed;
        res.message = "plan failed replay with " + std::to_string(res.verdict.violations.size()) + " violation(s)";
        return res;
    }
    const double obj = res.solution.objective;
    if (std::abs(res.plan.costs.total - obj) > 1e-6 * std::max(1.0, std::abs(obj))) {
        res.outcome = Outcome::VerificationFailed;
        res.message = "recomputed total " + std::to_string(res.plan.costs.total) + " differs from objective " +
                      std::to_string(obj);
        return res;
    }
    res.outcome = Outcome::Solved;
    return res;
}

SolveResult solve_scenario(const Scenario& scenario, const PipelineOptions& options) {
    auto validated = validate_scenario(scenario);
    if (!validated.ok()) {
        SolveResult res;
        res.outcome = Outcome::InvalidScenario;
        res.issues = std::move(validated.issues);
        res.message = "scenario failed validation";
        return res;
    }
    return solve_instance(*validated.instance, options);
}

int exit_code(const SolveResult& r) {
    switch (r.outcome) {
        case Outcome::Solved: return r.solution.status == solver::SolveStatus::Optimal ? 0 : 3;
        case Outcome::LimitReached:
        case Outcome::SolverFailure: return 3;
        default: return 1;
    }
}

nlohmann::json result_to_json(const SolveResult& r) {
    nlohmann::json j;
    if (r.instance && (r.has_plan() || r.outcome == Outcome::VerificationFailed)) {
        j = plan_to_json(*r.instance, r.plan, r.verdict, r.built.diagnostics);
    } else {
        j["status"] = r.instance ? solver::to_string(r.solution.status) : "not_solved";
        nlohmann::json diag = nlohmann::json::array();
        for (const auto& d : r.built.diagnostics) diag.push_back({{"code", to_string(d.code)}, {"message", d.message}});
        j["diagnostics"] = diag;
    }
    j["outcome"] = to_string(r.outcome);
    if (!r.message.empty()) j["message"] = r.message;
    if (!r.issues.empty()) {
        nlohmann::json issues = nlohmann::json::array();
        for (const auto& i : r.issues) issues.push_back({{"code", to_string(i.code)}, {"message", i.message}});
        j["issues"] = issues;
    }
    return j;
}

}  // namespace chargeplan
