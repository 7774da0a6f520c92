#include <algorithm>
#include <cmath>
#include <map>

#include "validator/plan.hpp"

// Independent re-derivation of plan feasibility and cost. Nothing here may call
// into the model builder: this file is the check on it.

namespace chargeplan {

namespace {

constexpr double kTol = 1e-6;

struct Reporter {
    const Instance& inst;
    ReplayResult& out;

    void operator()(ViolationCode code, int leg, int block, std::string msg) {
        Violation v{code, "", 0, 0, block, std::move(msg)};
        if (leg >= 0 && leg < inst.num_legs()) {
            const LegInfo& l = inst.leg(leg);
            v.truck = inst.truck(l.truck).id;
            v.leg_index = l.leg_index;
            v.day = l.day;
        }
        out.violations.push_back(std::move(v));
    }
};

// Blocks in which a leg may charge, inclusive.
std::pair<int, int> window_of(const Instance& inst, int g) {
    const LegInfo& l = inst.leg(g);
    const int beta = inst.slack_blocks();
    int open, close;
    if (inst.params().window_rule == WindowRule::SameLeg) {
        open = std::min(l.arrival_block, l.departure_block + beta);
        close = std::max(l.arrival_block, l.departure_block + beta) - 1;
    } else {
        const auto& tour = inst.tour(l.truck, l.day);
        open = l.position == 0 ? l.day * inst.grid().blocks_per_day() : inst.leg(tour[l.position - 1]).arrival_block;
        close = l.departure_block + beta - 1;
    }
    return {std::max(open, 0), std::min(close, inst.grid().total_blocks() - 1)};
}

double leg_demand_kwh(const Instance& inst, const LegInfo& l) {
    const Truck& k = inst.truck(l.truck);
    const double weight = l.payload_tons > k.tare_tons ? l.payload_tons : k.tare_tons;
    return k.consumption_kwh_per_km_ton * l.distance_km * weight;
}

}  // namespace

ReplayResult replay(const Instance& inst, const PlanReport& plan) {
    ReplayResult result;
    Reporter report{inst, result};
    const double hours = inst.grid().block_minutes / 60.0;
    const int horizon = inst.grid().total_blocks();
    const int n_types = inst.num_types();

    std::vector<double> charged(inst.num_legs(), 0.0);
    std::vector<int> last_block(inst.num_legs(), -1);
    std::map<std::pair<int, int>, int> per_leg_block;
    std::map<std::tuple<int, int, int>, int> occupancy;

    for (const auto& e : plan.events) {
        if (e.leg < 0 || e.leg >= inst.num_legs() || e.type < 0 || e.type >= n_types || e.block < 0 ||
            e.block >= horizon) {
            report(ViolationCode::UnknownEvent, e.leg, e.block, "event refers to an unknown leg, charger or block");
            continue;
        }
        const LegInfo& l = inst.leg(e.leg);
        if (e.location != l.origin) {
            report(ViolationCode::UnknownEvent, e.leg, e.block, "event is not at the leg's origin");
            continue;
        }
        if (!inst.location(l.origin).chargeable)
            report(ViolationCode::NotChargeable, e.leg, e.block, "charging at non-chargeable " + inst.location(l.origin).id);
        const auto [open, close] = window_of(inst, e.leg);
        if (e.block < open || e.block > close)
            report(ViolationCode::WindowViolation, e.leg, e.block,
                   "block " + std::to_string(e.block) + " outside window [" + std::to_string(open) + ", " +
                       std::to_string(close) + "]");
        const double expected = hours * inst.charger(e.type).rated_power_kw;
        if (std::abs(e.energy_kwh - expected) > kTol)
            report(ViolationCode::EventEnergyMismatch, e.leg, e.block,
                   "event energy " + std::to_string(e.energy_kwh) + " kWh, expected " + std::to_string(expected));
        charged[e.leg] += expected;
        last_block[e.leg] = std::max(last_block[e.leg], e.block);
        ++per_leg_block[{e.leg, e.block}];
        ++occupancy[{e.location, e.type, e.block}];
    }

    for (const auto& [key, n] : per_leg_block)
        if (n > 1)
            report(ViolationCode::MultipleChargers, key.first, key.second,
                   std::to_string(n) + " chargers used in one block");

    for (const auto& [key, n] : occupancy) {
        const auto [loc, type, block] = key;
        const int installed = plan.charger_counts.empty() ? 0 : plan.charger_counts[loc][type];
        if (n > installed) {
            Violation v{ViolationCode::CapacityViolation, "", 0, block / inst.grid().blocks_per_day(), block,
                        inst.location(loc).id + ": " + std::to_string(n) + " trucks on " + std::to_string(installed) +
                            " chargers of type " + std::to_string(inst.charger(type).id)};
            result.violations.push_back(std::move(v));
        }
    }

    const bool have_departures = static_cast<int>(plan.departures.size()) == inst.num_legs();
    if (!have_departures && inst.num_legs() > 0)
        report(ViolationCode::DepartureViolation, -1, -1, "departure list does not cover every leg");

    for (int k = 0; k < inst.num_trucks(); ++k) {
        const Truck& truck = inst.truck(k);
        for (int d = 0; d < inst.grid().num_days; ++d) {
            double soe = inst.initial_soe(k);
            int ready = d * inst.grid().blocks_per_day();
            for (int g : inst.tour(k, d)) {
                const LegInfo& l = inst.leg(g);
                if (soe + charged[g] > truck.battery_capacity_kwh + kTol)
                    report(ViolationCode::BatteryOverflow, g, -1,
                           "charging to " + std::to_string(soe + charged[g]) + " kWh exceeds the battery");
                // Clamp after an overflow so one bad event is reported once, not on every later leg.
                soe = std::min(soe + charged[g], truck.battery_capacity_kwh) - leg_demand_kwh(inst, l);
                if (soe < -kTol)
                    report(ViolationCode::EnergyViolation, g, -1,
                           "truck " + truck.id + " leg " + std::to_string(l.leg_index) + " ends at " +
                               std::to_string(soe) + " kWh");

                if (!have_departures) continue;
                const int dep = plan.departures[g];
                if (dep > l.departure_block + inst.slack_blocks())
                    report(ViolationCode::DepartureViolation, g, dep, "departure later than schedule plus slack");
                if (dep < last_block[g] + 1)
                    report(ViolationCode::DepartureViolation, g, dep, "departure before charging completes");
                if (dep < ready)
                    report(ViolationCode::DepartureViolation, g, dep, "departure before the truck is available");
                ready = dep + l.travel_blocks;
            }
        }
    }
    return result;
}

std::vector<std::vector<std::vector<double>>> power_curve(const Instance& inst, const PlanReport& plan) {
    std::vector<std::vector<std::vector<double>>> kw(
        inst.num_locations(),
        std::vector<std::vector<double>>(inst.num_types(), std::vector<double>(inst.grid().total_blocks(), 0.0)));
    for (const auto& e : plan.events) kw[e.location][e.type][e.block] += inst.charger(e.type).rated_power_kw;
    return kw;
}

CostBreakdown recompute_costs(const Instance& inst, const PlanReport& plan) {
    CostBreakdown c;
    const double hours = inst.grid().block_minutes / 60.0;
    const auto& params = inst.params();

    for (const auto& e : plan.events) {
        const ChargerType& type = inst.charger(e.type);
        c.energy += hours * type.rated_power_kw / type.efficiency * inst.energy_price(e.type, e.block);
    }

    for (int i = 0; i < static_cast<int>(plan.charger_counts.size()); ++i)
        for (int r = 0; r < inst.num_types(); ++r)
            c.infrastructure_capital += plan.charger_counts[i][r] * inst.charger(r).capital_cost;
    c.infrastructure_amortized =
        c.infrastructure_capital * inst.grid().num_days / (params.amortization_years * 365.0);
    c.infrastructure = params.amortize_in_objective ? c.infrastructure_amortized : c.infrastructure_capital;

    const auto kw = power_curve(inst, plan);
    const double price = inst.scenario().prices.peak_price_per_kw * (params.peak_includes_tau ? hours : 1.0);
    c.peak_kw.assign(inst.num_locations(), 0.0);
    double peak_sum = 0.0;
    for (int i = 0; i < inst.num_locations(); ++i) {
        for (int t = 0; t < inst.grid().total_blocks(); ++t) {
            double draw = 0.0;
            for (int r = 0; r < inst.num_types(); ++r) draw += kw[i][r][t];
            c.peak_kw[i] = std::max(c.peak_kw[i], draw);
        }
        peak_sum += price * c.peak_kw[i];
    }
    c.peak = params.alpha * peak_sum;
    c.total = c.energy + c.infrastructure + c.peak;
    return c;
}

}  // namespace chargeplan
