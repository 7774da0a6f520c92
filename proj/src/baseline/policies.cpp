#include "baseline/policies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "domain/scenario_json.hpp"

namespace chargeplan {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

int to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("policy: bad " + what + " '" + s + "'");
}

int require_type(const Instance& inst, int charger_id) {
    auto r = inst.type_index(charger_id);
    if (!r) throw std::invalid_argument("policy: unknown charger type " + std::to_string(charger_id));
    return *r;
}

}  // namespace

DesignPolicy parse_policy(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (name == "main-depot-only") {
        auto p = split(rest, ':');
        if (p.size() != 2) throw std::invalid_argument("policy: expected main-depot-only:COUNT:TYPE");
        MainDepotOnly m{to_int(p[0], "count"), to_int(p[1], "charger type")};
        if (m.count < 0) throw std::invalid_argument("policy: negative charger count");
        return m;
    }
    if (name == "peak-demand-cover") {
        if (rest.empty()) throw std::invalid_argument("policy: expected peak-demand-cover:TYPE");
        return PeakDemandCover{to_int(rest, "charger type")};
    }
    if (name == "explicit") {
        if (rest.empty()) throw std::invalid_argument("policy: expected explicit:PATH");
        return ExplicitDesign{load_charger_counts_file(rest)};
    }
    throw std::invalid_argument("policy: unknown policy '" + name + "'");
}

int busiest_location(const Instance& inst) {
    std::vector<int> departures(inst.num_locations(), 0);
    for (const auto& leg : inst.legs()) ++departures[leg.origin];
    int best = -1;
    for (int i = 0; i < inst.num_locations(); ++i) {
        if (!inst.location(i).chargeable || departures[i] == 0) continue;
        if (best < 0 || departures[i] > departures[best]) best = i;
    }
    return best;
}

ChargerCounts rule_based_design(const Instance& inst, const DesignPolicy& policy) {
    ChargerCounts counts;
    if (const auto* m = std::get_if<MainDepotOnly>(&policy)) {
        require_type(inst, m->charger_id);
        const int depot = busiest_location(inst);
        if (depot >= 0) counts[inst.location(depot).id][m->charger_id] = m->count;
        return counts;
    }
    if (const auto* e = std::get_if<ExplicitDesign>(&policy)) return e->counts;

    // Naive schedule: charge from the moment the truck is at the origin until the
    // battery is full or the scheduled departure, whichever comes first.
    const auto& cover = std::get<PeakDemandCover>(policy);
    const int r = require_type(inst, cover.charger_id);
    const double per_block = inst.grid().block_hours() * inst.charger(r).rated_power_kw;
    const int horizon = inst.grid().total_blocks();
    std::vector<std::vector<int>> busy(inst.num_locations(), std::vector<int>(horizon, 0));
    for (int k = 0; k < inst.num_trucks(); ++k) {
        const Truck& truck = inst.truck(k);
        for (int d = 0; d < inst.grid().num_days; ++d) {
            double soe = inst.initial_soe(k);
            int here = inst.grid().day_start_block(d);
            for (int g : inst.tour(k, d)) {
                const LegInfo& leg = inst.leg(g);
                if (inst.location(leg.origin).chargeable) {
                    for (int t = std::max(here, 0); t < leg.departure_block && t < horizon; ++t) {
                        if (soe >= truck.battery_capacity_kwh - 1e-9) break;
                        ++busy[leg.origin][t];
                        soe = std::min(truck.battery_capacity_kwh, soe + per_block);
                    }
                }
                const double weight = std::max(leg.payload_tons, truck.tare_tons);
                soe -= leg.distance_km * weight * truck.consumption_kwh_per_km_ton;
                here = leg.arrival_block;
            }
        }
    }
    for (int i = 0; i < inst.num_locations(); ++i) {
        const int peak = *std::max_element(busy[i].begin(), busy[i].end());
        if (peak > 0) counts[inst.location(i).id][cover.charger_id] = peak;
    }
    return counts;
}

}  // namespace chargeplan
