#include "domain/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace chargeplan {

const char* to_string(IssueCode code) {
    switch (code) {
        case IssueCode::ChainBroken: return "ChainBroken";
        case IssueCode::TimeOffGrid: return "TimeOffGrid";
        case IssueCode::UnknownReference: return "UnknownReference";
        case IssueCode::NegativeQuantity: return "NegativeQuantity";
        case IssueCode::InvalidValue: return "InvalidValue";
        case IssueCode::DuplicateId: return "DuplicateId";
    }
    return "Unknown";
}

namespace {

bool grid_is_valid(const TimeGrid& g) {
    return g.block_minutes > 0 && kMinutesPerDay % g.block_minutes == 0 && g.num_days >= 1;
}

int floor_to(int minutes, int step) {
    int q = minutes / step;
    if (minutes % step != 0 && minutes < 0) --q;
    return q * step;
}

int ceil_to(int minutes, int step) {
    return -floor_to(-minutes, step);
}

std::string leg_label(const TripLeg& leg) {
    std::ostringstream os;
    os << "truck " << leg.truck_id << " day " << leg.day << " leg " << leg.leg_index;
    return os.str();
}

}  // namespace

Scenario quantize_times(const Scenario& scenario, RoundingMode mode) {
    Scenario out = scenario;
    if (mode == RoundingMode::Strict || !grid_is_valid(out.time_grid)) return out;
    const int step = out.time_grid.block_minutes;
    for (auto& leg : out.legs) {
        leg.departure_minute = floor_to(leg.departure_minute, step);
        leg.arrival_minute = ceil_to(leg.arrival_minute, step);
        leg.travel_minutes = ceil_to(leg.travel_minutes, step);
    }
    return out;
}

std::optional<int> Instance::location_index(const std::string& id) const {
    for (int i = 0; i < num_locations(); ++i)
        if (scenario_.locations[i].id == id) return i;
    return std::nullopt;
}

std::optional<int> Instance::truck_index(const std::string& id) const {
    for (int k = 0; k < num_trucks(); ++k)
        if (scenario_.trucks[k].id == id) return k;
    return std::nullopt;
}

std::optional<int> Instance::type_index(int charger_id) const {
    for (int r = 0; r < num_types(); ++r)
        if (scenario_.chargers[r].id == charger_id) return r;
    return std::nullopt;
}

struct InstanceBuilder {
    static ValidationResult run(const Scenario& raw, RoundingMode mode);
};

ValidationResult InstanceBuilder::run(const Scenario& raw, RoundingMode mode) {
    ValidationResult result;
    auto& issues = result.issues;
    auto report = [&](IssueCode code, std::string msg) { issues.push_back({code, std::move(msg)}); };

    const Scenario s = quantize_times(raw, mode);
    const TimeGrid& grid = s.time_grid;
    const bool grid_ok = grid_is_valid(grid);
    if (grid.block_minutes <= 0)
        report(IssueCode::InvalidValue, "time_grid.block_minutes must be positive");
    else if (kMinutesPerDay % grid.block_minutes != 0)
        report(IssueCode::InvalidValue, "time_grid.block_minutes must divide 24 hours exactly");
    if (grid.num_days < 1) report(IssueCode::InvalidValue, "time_grid.num_days must be at least 1");

    std::unordered_map<std::string, int> loc_idx;
    for (int i = 0; i < static_cast<int>(s.locations.size()); ++i) {
        const auto& id = s.locations[i].id;
        if (id.empty()) report(IssueCode::InvalidValue, "location with empty id");
        if (!loc_idx.emplace(id, i).second) report(IssueCode::DuplicateId, "duplicate location id '" + id + "'");
    }

    std::vector<ChargerType> chargers = s.chargers;
    std::stable_sort(chargers.begin(), chargers.end(),
                     [](const ChargerType& a, const ChargerType& b) { return a.id < b.id; });
    std::unordered_map<int, int> type_idx;
    for (int r = 0; r < static_cast<int>(chargers.size()); ++r) {
        const auto& c = chargers[r];
        const std::string name = "charger type " + std::to_string(c.id);
        if (!type_idx.emplace(c.id, r).second) report(IssueCode::DuplicateId, "duplicate " + name);
        if (c.rated_power_kw < 0) report(IssueCode::NegativeQuantity, name + ": negative rated power");
        else if (!(c.rated_power_kw > 0)) report(IssueCode::InvalidValue, name + ": rated power must be positive");
        if (c.capital_cost < 0) report(IssueCode::NegativeQuantity, name + ": negative capital cost");
        if (!(c.efficiency > 0 && c.efficiency <= 1))
            report(IssueCode::InvalidValue, name + ": efficiency must lie in (0, 1]");
    }

    std::unordered_map<std::string, int> truck_idx;
    for (int k = 0; k < static_cast<int>(s.trucks.size()); ++k) {
        const auto& t = s.trucks[k];
        const std::string name = "truck '" + t.id + "'";
        if (!truck_idx.emplace(t.id, k).second) report(IssueCode::DuplicateId, "duplicate " + name);
        if (t.battery_capacity_kwh < 0) report(IssueCode::NegativeQuantity, name + ": negative battery capacity");
        else if (!(t.battery_capacity_kwh > 0)) report(IssueCode::InvalidValue, name + ": battery capacity must be positive");
        if (t.consumption_kwh_per_km_ton < 0) report(IssueCode::NegativeQuantity, name + ": negative consumption");
        else if (!(t.consumption_kwh_per_km_ton > 0)) report(IssueCode::InvalidValue, name + ": consumption must be positive");
        if (t.tare_tons < 0) report(IssueCode::NegativeQuantity, name + ": negative tare weight");
        if (t.initial_soe_kwh) {
            if (*t.initial_soe_kwh < 0) report(IssueCode::NegativeQuantity, name + ": negative initial state of energy");
            else if (*t.initial_soe_kwh > t.battery_capacity_kwh)
                report(IssueCode::InvalidValue, name + ": initial state of energy exceeds battery capacity");
        }
    }

    // Legs: references, quantities and times.
    const int step = grid.block_minutes > 0 ? grid.block_minutes : 1;
    const int period_end = grid.num_days * kMinutesPerDay;
    for (const auto& leg : s.legs) {
        const std::string name = leg_label(leg);
        if (!truck_idx.count(leg.truck_id)) report(IssueCode::UnknownReference, name + ": unknown truck '" + leg.truck_id + "'");
        if (!loc_idx.count(leg.origin)) report(IssueCode::UnknownReference, name + ": unknown origin '" + leg.origin + "'");
        if (!loc_idx.count(leg.destination))
            report(IssueCode::UnknownReference, name + ": unknown destination '" + leg.destination + "'");
        if (leg.day < 0 || leg.day >= grid.num_days) report(IssueCode::InvalidValue, name + ": day outside the analysis period");
        if (leg.leg_index < 1) report(IssueCode::InvalidValue, name + ": leg index must be 1-based");
        if (leg.distance_km < 0) report(IssueCode::NegativeQuantity, name + ": negative distance");
        if (leg.payload_tons < 0) report(IssueCode::NegativeQuantity, name + ": negative payload");
        if (leg.travel_minutes < 0) report(IssueCode::NegativeQuantity, name + ": negative travel time");
        if (leg.arrival_minute < leg.departure_minute)
            report(IssueCode::InvalidValue, name + ": arrival precedes departure");
        else if (leg.travel_minutes > leg.arrival_minute - leg.departure_minute)
            report(IssueCode::InvalidValue, name + ": travel time exceeds the scheduled trip duration");
        if (leg.distance_km > 0 && leg.travel_minutes <= 0)
            report(IssueCode::InvalidValue, name + ": positive distance needs a positive travel time");
        const int day_start = leg.day * kMinutesPerDay;
        if (leg.departure_minute < day_start || leg.departure_minute >= day_start + kMinutesPerDay)
            report(IssueCode::InvalidValue, name + ": departure outside its day");
        if (leg.arrival_minute > period_end) report(IssueCode::InvalidValue, name + ": arrival after the analysis period");
        if (mode == RoundingMode::Strict && grid_ok) {
            if (leg.departure_minute % step != 0 || leg.arrival_minute % step != 0 || leg.travel_minutes % step != 0)
                report(IssueCode::TimeOffGrid, name + ": time not aligned to the block grid");
        }
    }

    // Tours: contiguous leg indices and chain consistency within each truck-day.
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (int g = 0; g < static_cast<int>(s.legs.size()); ++g) {
        const auto& leg = s.legs[g];
        auto it = truck_idx.find(leg.truck_id);
        if (it == truck_idx.end()) continue;
        groups[{it->second, leg.day}].push_back(g);
    }
    for (auto& [key, members] : groups) {
        std::stable_sort(members.begin(), members.end(),
                         [&](int a, int b) { return s.legs[a].leg_index < s.legs[b].leg_index; });
        for (std::size_t p = 0; p < members.size(); ++p) {
            const auto& leg = s.legs[members[p]];
            if (leg.leg_index != static_cast<int>(p) + 1) {
                if (p > 0 && s.legs[members[p - 1]].leg_index == leg.leg_index)
                    report(IssueCode::DuplicateId, leg_label(leg) + ": duplicate leg index");
                else
                    report(IssueCode::InvalidValue, leg_label(leg) + ": leg indices must be contiguous from 1");
            }
            if (p > 0) {
                const auto& prev = s.legs[members[p - 1]];
                if (prev.destination != leg.origin)
                    report(IssueCode::ChainBroken, leg_label(leg) + ": origin '" + leg.origin +
                                                       "' differs from previous destination '" + prev.destination + "'");
            }
        }
    }

    // Prices.
    const auto& pr = s.prices;
    if (pr.peak_price_per_kw < 0) report(IssueCode::NegativeQuantity, "prices: negative peak price");
    auto check_profile = [&](const std::vector<double>& profile, const std::string& what) {
        if (grid_ok && profile.size() != static_cast<std::size_t>(grid.blocks_per_day()) &&
            profile.size() != static_cast<std::size_t>(grid.total_blocks()))
            report(IssueCode::InvalidValue, what + ": profile must cover one day or the whole period block by block");
        for (double v : profile)
            if (v < 0) {
                report(IssueCode::NegativeQuantity, what + ": negative energy price");
                break;
            }
    };
    if (!pr.default_energy_per_kwh.empty()) check_profile(pr.default_energy_per_kwh, "prices.default");
    for (const auto& [id, profile] : pr.energy_per_kwh_by_type) {
        if (!type_idx.count(id)) report(IssueCode::UnknownReference, "prices: unknown charger type " + std::to_string(id));
        check_profile(profile, "prices.type " + std::to_string(id));
    }
    for (const auto& c : chargers)
        if (pr.default_energy_per_kwh.empty() && !pr.energy_per_kwh_by_type.count(c.id))
            report(IssueCode::InvalidValue, "prices: no energy price for charger type " + std::to_string(c.id));

    // Parameters.
    const auto& params = s.params;
    if (params.alpha < 0) report(IssueCode::NegativeQuantity, "params.alpha is negative");
    if (params.slack_minutes < 0) report(IssueCode::NegativeQuantity, "params.slack_minutes is negative");
    else if (params.slack_minutes % step != 0)
        report(IssueCode::TimeOffGrid, "params.slack_minutes is not a whole number of blocks");
    if (!(params.amortization_years > 0)) report(IssueCode::InvalidValue, "params.amortization_years must be positive");
    for (const auto& [loc, per_type] : params.fixed_counts) {
        if (!loc_idx.count(loc)) report(IssueCode::UnknownReference, "fixed_counts: unknown location '" + loc + "'");
        for (const auto& [id, n] : per_type) {
            if (!type_idx.count(id))
                report(IssueCode::UnknownReference, "fixed_counts: unknown charger type " + std::to_string(id));
            if (n < 0) report(IssueCode::NegativeQuantity, "fixed_counts: negative count at '" + loc + "'");
        }
    }

    if (!issues.empty()) return result;

    Instance inst;
    inst.scenario_ = s;
    inst.scenario_.chargers = chargers;
    const int n_trucks = static_cast<int>(s.trucks.size());
    const int n_types = static_cast<int>(chargers.size());
    const int n_locs = static_cast<int>(s.locations.size());

    inst.tours_.assign(n_trucks, std::vector<std::vector<int>>(grid.num_days));
    for (const auto& [key, members] : groups) {
        const auto [k, day] = key;
        for (std::size_t p = 0; p < members.size(); ++p) {
            const auto& leg = s.legs[members[p]];
            LegInfo info;
            info.truck = k;
            info.day = day;
            info.position = static_cast<int>(p);
            info.origin = loc_idx.at(leg.origin);
            info.destination = loc_idx.at(leg.destination);
            info.departure_block = leg.departure_minute / step;
            info.arrival_block = leg.arrival_minute / step;
            info.travel_blocks = leg.travel_minutes / step;
            info.distance_km = leg.distance_km;
            info.payload_tons = leg.payload_tons;
            info.leg_index = leg.leg_index;
            inst.tours_[k][day].push_back(static_cast<int>(inst.legs_.size()));
            inst.legs_.push_back(info);
        }
    }

    const int total = grid.total_blocks();
    const int per_day = grid.blocks_per_day();
    inst.prices_.assign(n_types, std::vector<double>(total, 0.0));
    for (int r = 0; r < n_types; ++r) {
        auto it = pr.energy_per_kwh_by_type.find(chargers[r].id);
        const auto& profile = it != pr.energy_per_kwh_by_type.end() ? it->second : pr.default_energy_per_kwh;
        for (int t = 0; t < total; ++t)
            inst.prices_[r][t] = profile.size() == static_cast<std::size_t>(total) ? profile[t] : profile[t % per_day];
    }

    inst.fixed_counts_.assign(n_locs, std::vector<int>(n_types, 0));
    for (const auto& [loc, per_type] : params.fixed_counts)
        for (const auto& [id, n] : per_type) inst.fixed_counts_[loc_idx.at(loc)][type_idx.at(id)] = n;

    inst.initial_soe_.resize(n_trucks);
    for (int k = 0; k < n_trucks; ++k)
        inst.initial_soe_[k] = s.trucks[k].initial_soe_kwh.value_or(s.trucks[k].battery_capacity_kwh);
    inst.slack_blocks_ = params.slack_minutes / step;

    result.instance = std::move(inst);
    return result;
}

ValidationResult validate_scenario(const Scenario& raw, RoundingMode mode) {
    return InstanceBuilder::run(raw, mode);
}

}  // namespace chargeplan

namespace chargeplan {

Scenario with_block_minutes(const Scenario& s, int minutes) {
    Scenario out = s;
    const TimeGrid old = s.time_grid;
    out.time_grid.block_minutes = minutes;
    if (old.block_minutes <= 0 || minutes <= 0 || kMinutesPerDay % minutes != 0) return out;
    auto resample = [&](const std::vector<double>& profile) {
        const bool whole_period = profile.size() == static_cast<std::size_t>(old.total_blocks()) && old.num_days > 1;
        const int span = whole_period ? old.num_days * kMinutesPerDay : kMinutesPerDay;
        std::vector<double> next;
        if (profile.empty() || profile.size() * old.block_minutes != static_cast<std::size_t>(span)) return profile;
        for (int m = 0; m < span; m += minutes) next.push_back(profile[m / old.block_minutes]);
        return next;
    };
    out.prices.default_energy_per_kwh = resample(s.prices.default_energy_per_kwh);
    for (auto& [id, profile] : out.prices.energy_per_kwh_by_type) profile = resample(profile);
    return out;
}

}  // namespace chargeplan
