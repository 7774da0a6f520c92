#include "validator/plan.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "domain/scenario_json.hpp"

namespace chargeplan {

PlanReport decode_plan(const Instance& inst, const BuiltModel& built, const solver::Solution& sol) {
    const auto& cat = built.catalog;
    PlanReport plan;
    plan.status = solver::to_string(sol.status);
    plan.objective = sol.objective;
    plan.best_bound = sol.best_bound;
    plan.gap = sol.gap;
    plan.nodes = sol.nodes;
    plan.wall_seconds = sol.wall_seconds;

    const bool codesign = inst.params().design_mode == DesignMode::CoDesign;
    plan.charger_counts.assign(inst.num_locations(), std::vector<int>(inst.num_types(), 0));
    for (int i = 0; i < inst.num_locations(); ++i) {
        for (int r = 0; r < inst.num_types(); ++r) {
            if (!codesign)
                plan.charger_counts[i][r] = inst.fixed_count(i, r);
            else if (sol.has_solution() && cat.chargers[i][r] >= 0)
                plan.charger_counts[i][r] = static_cast<int>(std::lround(sol.values[cat.chargers[i][r]]));
        }
    }
    if (!sol.has_solution()) return plan;

    const double tau = inst.grid().block_hours();
    for (const auto& c : cat.charge) {
        if (sol.values[c.column] < 0.5) continue;
        plan.events.push_back({c.leg, c.block, inst.leg(c.leg).origin, c.type, tau * inst.charger(c.type).rated_power_kw});
    }

    // Scheduled departure unless charging or the previous leg pushes it later.
    std::vector<int> last_block(inst.num_legs(), -1);
    for (const auto& e : plan.events) last_block[e.leg] = std::max(last_block[e.leg], e.block);
    plan.departures.assign(inst.num_legs(), 0);
    for (int k = 0; k < inst.num_trucks(); ++k) {
        for (int d = 0; d < inst.grid().num_days; ++d) {
            int earliest = inst.grid().day_start_block(d);
            for (int g : inst.tour(k, d)) {
                const int dep = std::max({inst.leg(g).departure_block, earliest, last_block[g] + 1});
                plan.departures[g] = dep;
                earliest = dep + inst.leg(g).travel_blocks;
            }
        }
    }
    return plan;
}

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::UnknownEvent: return "UnknownEvent";
        case ViolationCode::WindowViolation: return "WindowViolation";
        case ViolationCode::NotChargeable: return "NotChargeable";
        case ViolationCode::EventEnergyMismatch: return "EventEnergyMismatch";
        case ViolationCode::EnergyViolation: return "EnergyViolation";
        case ViolationCode::BatteryOverflow: return "BatteryOverflow";
        case ViolationCode::CapacityViolation: return "CapacityViolation";
        case ViolationCode::MultipleChargers: return "MultipleChargers";
        case ViolationCode::DepartureViolation: return "DepartureViolation";
    }
    return "?";
}

std::vector<double> smooth_daily(const std::vector<double>& day, int width) {
    const int n = static_cast<int>(day.size());
    std::vector<double> out(n, 0.0);
    if (n == 0 || width <= 1) return day;
    const int lo = -(width / 2), hi = lo + width - 1;
    for (int t = 0; t < n; ++t) {
        double s = 0.0;
        for (int o = lo; o <= hi; ++o) s += day[((t + o) % n + n) % n];
        out[t] = s / width;
    }
    return out;
}

namespace {

std::string clock_of(const Instance& inst, int block) {
    const int minutes = block * inst.grid().block_minutes;
    return format_clock(minutes % kMinutesPerDay);
}

}  // namespace

nlohmann::json costs_to_json(const Instance& inst, const CostBreakdown& c) {
    nlohmann::json peak_kw = nlohmann::json::object();
    for (int i = 0; i < static_cast<int>(c.peak_kw.size()); ++i) peak_kw[inst.location(i).id] = c.peak_kw[i];
    return {{"energy", c.energy},
            {"infrastructure", c.infrastructure},
            {"infrastructure_capital", c.infrastructure_capital},
            {"infrastructure_amortized", c.infrastructure_amortized},
            {"peak", c.peak},
            {"total", c.total},
            {"total_amortized", c.total_amortized()},
            {"peak_kw", peak_kw}};
}

nlohmann::json violations_to_json(const ReplayResult& verdict) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& v : verdict.violations)
        list.push_back({{"code", to_string(v.code)},
                        {"truck", v.truck},
                        {"day", v.day},
                        {"leg", v.leg_index},
                        {"block", v.block},
                        {"message", v.message}});
    return list;
}

nlohmann::json plan_to_json(const Instance& inst, const PlanReport& plan, const ReplayResult& verdict,
                            const std::vector<Diagnostic>& diagnostics) {
    using nlohmann::json;
    const auto& p = inst.params();
    json counts = json::object();
    for (int i = 0; i < inst.num_locations(); ++i) {
        json per_type = json::object();
        for (int r = 0; r < inst.num_types(); ++r)
            per_type[std::to_string(inst.charger(r).id)] =
                plan.charger_counts.empty() ? 0 : plan.charger_counts[i][r];
        counts[inst.location(i).id] = per_type;
    }

    json events = json::array();
    for (const auto& e : plan.events) {
        const LegInfo& leg = inst.leg(e.leg);
        events.push_back({{"truck", inst.truck(leg.truck).id},
                          {"day", leg.day},
                          {"leg", leg.leg_index},
                          {"block", e.block},
                          {"time", clock_of(inst, e.block)},
                          {"location", inst.location(e.location).id},
                          {"charger_type", inst.charger(e.type).id},
                          {"energy_kwh", e.energy_kwh}});
    }

    json departures = json::array();
    for (int g = 0; g < static_cast<int>(plan.departures.size()); ++g) {
        const LegInfo& leg = inst.leg(g);
        departures.push_back({{"truck", inst.truck(leg.truck).id},
                              {"day", leg.day},
                              {"leg", leg.leg_index},
                              {"scheduled_block", leg.departure_block},
                              {"actual_block", plan.departures[g]},
                              {"delay_blocks", plan.departures[g] - leg.departure_block}});
    }

    json diag = json::array();
    for (const auto& d : diagnostics) diag.push_back({{"code", to_string(d.code)}, {"message", d.message}});

    return {{"status", plan.status},
            {"objective", plan.objective},
            {"best_bound", plan.best_bound},
            {"gap", plan.gap},
            {"nodes", plan.nodes},
            {"wall_seconds", plan.wall_seconds},
            {"params",
             {{"alpha", p.alpha},
              {"slack_minutes", p.slack_minutes},
              {"design_mode", p.design_mode == DesignMode::CoDesign ? "codesign" : "fixed"},
              {"block_minutes", inst.grid().block_minutes},
              {"num_days", inst.grid().num_days}}},
            {"charger_counts", counts},
            {"events", events},
            {"departures", departures},
            {"costs", costs_to_json(inst, plan.costs)},
            {"replay", {{"verdict", verdict.clean() ? "Clean" : "Violations"}, {"violations", violations_to_json(verdict)}}},
            {"diagnostics", diag}};
}

void write_power_curve_csv(const Instance& inst, const PlanReport& plan, std::ostream& out) {
    const auto curve = power_curve(inst, plan);
    const int per_day = inst.grid().blocks_per_day();
    out << "location,day,block";
    for (int r = 0; r < inst.num_types(); ++r) out << ",kw_type_" << inst.charger(r).id;
    out << ",kw_total\n";
    out << std::setprecision(10);
    for (int i = 0; i < inst.num_locations(); ++i) {
        if (!inst.location(i).chargeable) continue;
        for (int t = 0; t < inst.grid().total_blocks(); ++t) {
            out << inst.location(i).id << ',' << t / per_day << ',' << t % per_day;
            double total = 0.0;
            for (int r = 0; r < inst.num_types(); ++r) {
                out << ',' << curve[i][r][t];
                total += curve[i][r][t];
            }
            out << ',' << total << '\n';
        }
    }
}

}  // namespace chargeplan
