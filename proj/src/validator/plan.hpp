#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domain/instance.hpp"
#include "model/builder.hpp"
#include "solver/milp.hpp"

namespace chargeplan {

struct ChargeEvent {
    int leg = 0;
    int block = 0;
    int location = 0;
    int type = 0;  // charger type position
    double energy_kwh = 0.0;

    bool operator==(const ChargeEvent&) const = default;
};

struct CostBreakdown {
    double energy = 0.0;
    double infrastructure = 0.0;            // as weighted in the objective
    double infrastructure_capital = 0.0;    // full capital cost
    double infrastructure_amortized = 0.0;  // capital x days / (years x 365)
    double peak = 0.0;                      // alpha-weighted
    double total = 0.0;                     // energy + infrastructure + peak
    std::vector<double> peak_kw;            // literal max draw per location

    double total_amortized() const { return energy + infrastructure_amortized + peak; }
};

/// Decoded plan. Events are ordered by leg then block, so two plans with the same
/// schedule compare equal whatever order the solver produced them in.
struct PlanReport {
    std::vector<std::vector<int>> charger_counts;  // [location][type]
    std::vector<ChargeEvent> events;
    std::vector<int> departures;  // actual departure block per leg
    CostBreakdown costs;

    std::string status;
    double objective = 0.0;
    double best_bound = 0.0;
    double gap = 0.0;
    long nodes = 0;
    double wall_seconds = 0.0;
};

/// Read a plan out of a solver assignment. Each leg departs at its scheduled block
/// unless its charging or the previous leg forces it later; costs are left for
/// recompute_costs.
PlanReport decode_plan(const Instance& inst, const BuiltModel& built, const solver::Solution& sol);

enum class ViolationCode {
    UnknownEvent,
    WindowViolation,
    NotChargeable,
    EventEnergyMismatch,
    EnergyViolation,
    BatteryOverflow,
    CapacityViolation,
    MultipleChargers,
    DepartureViolation,
};

const char* to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    std::string truck;
    int leg_index = 0;
    int day = 0;
    int block = -1;
    std::string message;
};

struct ReplayResult {
    std::vector<Violation> violations;
    bool clean() const { return violations.empty(); }
};

/// Simulate the plan leg by leg against the scenario. Shares no code with the
/// model builder. Every fault is reported.
ReplayResult replay(const Instance& inst, const PlanReport& plan);

/// Power drawn, kW, indexed [location][type][block].
std::vector<std::vector<std::vector<double>>> power_curve(const Instance& inst, const PlanReport& plan);

CostBreakdown recompute_costs(const Instance& inst, const PlanReport& plan);

/// Circular centred moving average over `width` blocks of one day.
std::vector<double> smooth_daily(const std::vector<double>& day, int width = 4);

nlohmann::json plan_to_json(const Instance& inst, const PlanReport& plan, const ReplayResult& verdict,
                            const std::vector<Diagnostic>& diagnostics = {});
nlohmann::json costs_to_json(const Instance& inst, const CostBreakdown& costs);
nlohmann::json violations_to_json(const ReplayResult& verdict);

/// location,day,block,kw_type_<id>...,kw_total for every chargeable location.
void write_power_curve_csv(const Instance& inst, const PlanReport& plan, std::ostream& out);

}  // namespace chargeplan
