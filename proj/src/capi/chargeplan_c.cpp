#include "chargeplan/chargeplan.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "baseline/compare.hpp"
#include "domain/scenario_json.hpp"
#include "scenario/pipeline.hpp"
#include "scenario/sweep.hpp"
#include "scenario/synthetic.hpp"

using namespace chargeplan;
using nlohmann::json;

struct chp_scenario {
    Scenario scenario;
};

struct chp_result {
    SolveResult result;
    std::string lp;
};

namespace {

thread_local std::string g_last_error;

// Thrown for bad caller input; mapped to CHP_USAGE.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

chp_status fail(chp_status status, const std::string& code, const std::string& message) {
    g_last_error = json{{"error", {{"code", code}, {"message", message}}}}.dump();
    return status;
}

template <class F>
chp_status guarded(F&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const UsageError& e) {
        return fail(CHP_USAGE, "usage", e.what());
    } catch (const FormatError& e) {
        return fail(CHP_USAGE, "format", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CHP_USAGE, "config", e.what());
    } catch (const json::exception& e) {
        return fail(CHP_USAGE, "json", e.what());
    } catch (const std::exception& e) {
        return fail(CHP_INTERNAL, "internal", e.what());
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

json parse_options(const char* text) {
    if (!text || !*text) return json::object();
    json j = json::parse(text);
    if (!j.is_object()) throw UsageError("options must be a JSON object");
    return j;
}

DesignMode design_from(const std::string& name) {
    if (name == "codesign") return DesignMode::CoDesign;
    if (name == "fixed") return DesignMode::FixedInfrastructure;
    throw UsageError("design must be 'codesign' or 'fixed', got '" + name + "'");
}

solver::SolverOptions solver_options(const json& o) {
    solver::SolverOptions s;
    s.rel_gap = o.value("gap", s.rel_gap);
    s.node_limit = o.value("node_limit", s.node_limit);
    s.time_limit_s = o.value("time_limit_s", s.time_limit_s);
    if (o.value("trace", false)) s.trace = &std::cerr;
    if (!(s.rel_gap >= 0.0)) throw UsageError("gap must be nonnegative");
    return s;
}

// Apply scenario-level overrides from an options object.
Scenario apply_params(Scenario s, const json& o) {
    if (o.contains("alpha")) s.params.alpha = o.at("alpha").get<double>();
    if (o.contains("slack_minutes")) s.params.slack_minutes = o.at("slack_minutes").get<int>();
    if (o.contains("design")) s.params.design_mode = design_from(o.at("design").get<std::string>());
    if (o.contains("fixed_counts")) s.params.fixed_counts = charger_counts_from_json(o.at("fixed_counts"));
    return s;
}

json issues_json(const std::vector<Issue>& issues) {
    json list = json::array();
    for (const auto& i : issues) list.push_back({{"code", to_string(i.code)}, {"message", i.message}});
    return list;
}

Instance require_valid(const Scenario& s) {
    auto v = validate_scenario(s);
    if (!v.ok()) {
        std::string msg = "scenario failed validation:";
        for (const auto& i : v.issues) msg += std::string(" [") + to_string(i.code) + "] " + i.message + ";";
        throw std::invalid_argument(msg);
    }
    return *v.instance;
}

chp_status status_of(int exit) {
    switch (exit) {
        case 0: return CHP_OK;
        case 1: return CHP_INFEASIBLE;
        case 3: return CHP_LIMIT;
        default: return CHP_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* chp_version(void) { return "0.1.0"; }

const char* chp_last_error(void) { return g_last_error.c_str(); }

void chp_string_free(char* s) { std::free(s); }

chp_status chp_scenario_load(const char* path, chp_scenario** out) {
    return guarded([&] {
        if (!path || !out) throw UsageError("null argument");
        *out = new chp_scenario{load_scenario_file(path)};
        return CHP_OK;
    });
}

chp_status chp_scenario_parse(const char* text, chp_scenario** out) {
    return guarded([&] {
        if (!text || !out) throw UsageError("null argument");
        *out = new chp_scenario{scenario_from_json(json::parse(text))};
        return CHP_OK;
    });
}

chp_status chp_scenario_generate(uint64_t seed, int trucks, int locations, int days, double tightness,
                                 chp_scenario** out) {
    return guarded([&] {
        if (!out) throw UsageError("null argument");
        SyntheticOptions o;
        o.seed = seed;
        o.trucks = trucks;
        o.locations = locations;
        o.days = days;
        o.tightness = tightness;
        *out = new chp_scenario{generate_synthetic(o)};
        return CHP_OK;
    });
}

chp_status chp_scenario_to_json(const chp_scenario* s, char** out) {
    return guarded([&] {
        if (!s || !out) throw UsageError("null argument");
        *out = dup(scenario_to_json(s->scenario).dump(2) + "\n");
        return CHP_OK;
    });
}

chp_status chp_scenario_set_block_minutes(chp_scenario* s, int minutes) {
    return guarded([&] {
        if (!s) throw UsageError("null argument");
        if (minutes <= 0 || 1440 % minutes != 0) throw UsageError("block length must divide the day");
        s->scenario = with_block_minutes(s->scenario, minutes);
        return CHP_OK;
    });
}

chp_status chp_scenario_validate(const chp_scenario* s, char** report) {
    return guarded([&] {
        if (!s || !report) throw UsageError("null argument");
        auto v = validate_scenario(s->scenario);
        json j{{"valid", v.ok()}, {"issues", issues_json(v.issues)}};
        if (v.ok()) {
            const Instance& inst = *v.instance;
            j["summary"] = {{"trucks", inst.num_trucks()},
                            {"locations", inst.num_locations()},
                            {"legs", inst.num_legs()},
                            {"charger_types", inst.num_types()},
                            {"blocks", inst.grid().total_blocks()}};
        }
        *report = dup(j.dump(2) + "\n");
        return v.ok() ? CHP_OK : CHP_INFEASIBLE;
    });
}

void chp_scenario_free(chp_scenario* s) { delete s; }

chp_status chp_solve(const chp_scenario* s, const char* options_json, chp_result** out) {
    return guarded([&] {
        if (!s || !out) throw UsageError("null argument");
        const json o = parse_options(options_json);
        Scenario sc = apply_params(s->scenario, o);
        PipelineOptions opts;
        opts.solver = solver_options(o);
        std::ostringstream lp;
        opts.lp_dump = &lp;
        auto* r = new chp_result{solve_scenario(sc, opts), {}};
        r->lp = lp.str();
        *out = r;
        if (r->result.outcome == Outcome::InvalidScenario) return CHP_INFEASIBLE;
        if (r->result.outcome == Outcome::VerificationFailed) return CHP_INTERNAL;
        return status_of(exit_code(r->result));
    });
}

chp_status chp_result_report(const chp_result* r, char** out) {
    return guarded([&] {
        if (!r || !out) throw UsageError("null argument");
        *out = dup(result_to_json(r->result).dump(2) + "\n");
        return CHP_OK;
    });
}

chp_status chp_result_power_csv(const chp_result* r, char** out) {
    return guarded([&] {
        if (!r || !out) throw UsageError("null argument");
        if (!r->result.has_plan()) throw UsageError("result has no plan");
        std::ostringstream csv;
        write_power_curve_csv(*r->result.instance, r->result.plan, csv);
        *out = dup(csv.str());
        return CHP_OK;
    });
}

chp_status chp_result_lp(const chp_result* r, char** out) {
    return guarded([&] {
        if (!r || !out) throw UsageError("null argument");
        *out = dup(r->lp);
        return CHP_OK;
    });
}

double chp_result_objective(const chp_result* r) { return r ? r->result.solution.objective : 0.0; }

void chp_result_free(chp_result* r) { delete r; }

chp_status chp_compare(const chp_scenario* s, const char* policy, const char* options_json, char** report) {
    return guarded([&] {
        if (!s || !policy || !report) throw UsageError("null argument");
        const json o = parse_options(options_json);
        const Instance inst = require_valid(apply_params(s->scenario, o));
        const auto counts = rule_based_design(inst, parse_policy(policy));
        PipelineOptions opts;
        opts.solver = solver_options(o);
        auto cmp = compare_designs(inst, counts, opts, o.value("threads", 1));
        *report = dup(comparison_to_json(cmp).dump(2) + "\n");
        if (cmp.codesign.outcome == Outcome::VerificationFailed || cmp.fixed.outcome == Outcome::VerificationFailed)
            return CHP_INTERNAL;
        return status_of(exit_code(cmp));
    });
}

chp_status chp_sweep(const chp_scenario* s, const char* options_json, char** summary) {
    return guarded([&] {
        if (!s || !summary) throw UsageError("null argument");
        const json o = parse_options(options_json);
        SweepSpec spec;
        spec.alphas = o.value("alphas", std::vector<double>{s->scenario.params.alpha});
        spec.slack_minutes = o.value("slack_minutes", std::vector<int>{s->scenario.params.slack_minutes});
        for (const auto& d : o.value("designs", std::vector<std::string>{"codesign"}))
            spec.designs.push_back(design_from(d));
        spec.solver = solver_options(o);
        spec.threads = o.value("threads", 1);
        spec.out_dir = o.value("out_dir", std::string());
        if (o.contains("fixed_counts")) {
            spec.fixed_counts = charger_counts_from_json(o.at("fixed_counts"));
        } else if (o.contains("policy")) {
            const Instance inst = require_valid(s->scenario);
            spec.fixed_counts = rule_based_design(inst, parse_policy(o.at("policy").get<std::string>()));
        } else {
            spec.fixed_counts = s->scenario.params.fixed_counts;
        }
        const auto result = run_sweep(s->scenario, spec);
        json cells = json::array();
        int worst = 0;
        for (const auto& c : result.cells) {
            const int code = exit_code(c.result);
            worst = std::max(worst, code == 1 && c.result.outcome == Outcome::Infeasible ? 0 : code);
            cells.push_back({{"cell", c.name},
                             {"outcome", to_string(c.result.outcome)},
                             {"objective", c.result.has_plan() ? json(c.result.plan.costs.total) : json(nullptr)}});
        }
        *summary = dup(json{{"cells", cells}, {"failures", result.failures()}}.dump(2) + "\n");
        return status_of(worst);
    });
}

}  // extern "C"
