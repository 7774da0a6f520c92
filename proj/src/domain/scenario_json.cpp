#include "domain/scenario_json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace chargeplan {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(where + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw FormatError(where + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return field<T>(obj, key, where);
}

const json& section(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw FormatError(std::string("missing top-level key '") + key + "'");
    return *it;
}

int parse_type_key(const std::string& key, const std::string& where) {
    try {
        std::size_t used = 0;
        int id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return id;
    } catch (const std::exception&) {
        throw FormatError(where + ": charger type key '" + key + "' is not an integer");
    }
}

std::vector<double> number_list(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw FormatError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw FormatError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

int parse_clock(const std::string& text) {
    int h = 0, m = 0;
    char tail = 0;
    if (text.size() != 5 || text[2] != ':' || std::sscanf(text.c_str(), "%2d:%2d%c", &h, &m, &tail) != 2)
        throw FormatError("malformed time '" + text + "', expected HH:MM");
    if (h < 0 || h > 23 || m < 0 || m > 59) throw FormatError("time out of range '" + text + "'");
    return h * 60 + m;
}

std::string format_clock(int minutes) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

ChargerCounts charger_counts_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("charger counts: expected an object keyed by location");
    ChargerCounts counts;
    for (const auto& [loc, per_type] : doc.items()) {
        if (!per_type.is_object()) throw FormatError("charger counts for '" + loc + "': expected an object");
        auto& slot = counts[loc];
        for (const auto& [key, n] : per_type.items()) {
            if (!n.is_number_integer()) throw FormatError("charger counts for '" + loc + "': counts must be integers");
            slot[parse_type_key(key, "charger counts")] = n.get<int>();
        }
    }
    return counts;
}

json charger_counts_to_json(const ChargerCounts& counts) {
    json out = json::object();
    for (const auto& [loc, per_type] : counts) {
        json slot = json::object();
        for (const auto& [id, n] : per_type) slot[std::to_string(id)] = n;
        out[loc] = std::move(slot);
    }
    return out;
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("scenario: expected a JSON object");
    Scenario s;

    const auto& grid = section(doc, "time_grid");
    s.time_grid.block_minutes = field<int>(grid, "block_minutes", "time_grid");
    s.time_grid.num_days = field<int>(grid, "num_days", "time_grid");

    for (const auto& loc : section(doc, "locations")) {
        Location l;
        l.id = field<std::string>(loc, "id", "locations");
        l.chargeable = field_or<bool>(loc, "chargeable", true, "location " + l.id);
        s.locations.push_back(std::move(l));
    }

    for (const auto& c : section(doc, "chargers")) {
        ChargerType t;
        t.id = field<int>(c, "id", "chargers");
        const std::string where = "charger " + std::to_string(t.id);
        t.rated_power_kw = field<double>(c, "rated_power_kw", where);
        t.capital_cost = field<double>(c, "capital_cost", where);
        t.efficiency = field<double>(c, "efficiency", where);
        s.chargers.push_back(t);
    }

    for (const auto& tr : section(doc, "trucks")) {
        Truck t;
        t.id = field<std::string>(tr, "id", "trucks");
        const std::string where = "truck " + t.id;
        t.battery_capacity_kwh = field<double>(tr, "battery_capacity_kwh", where);
        t.consumption_kwh_per_km_ton = field<double>(tr, "consumption_kwh_per_km_ton", where);
        if (tr.contains("initial_soe_kwh")) t.initial_soe_kwh = field<double>(tr, "initial_soe_kwh", where);
        t.tare_tons = field_or<double>(tr, "tare_tons", 1.0, where);
        s.trucks.push_back(std::move(t));
    }

    for (const auto& lg : section(doc, "legs")) {
        TripLeg leg;
        leg.truck_id = field<std::string>(lg, "truck", "legs");
        leg.day = field<int>(lg, "day", "legs");
        leg.leg_index = field<int>(lg, "leg", "legs");
        const std::string where = "leg " + leg.truck_id + "/" + std::to_string(leg.day) + "/" + std::to_string(leg.leg_index);
        leg.origin = field<std::string>(lg, "origin", where);
        leg.destination = field<std::string>(lg, "destination", where);
        const int arrival_day = field_or<int>(lg, "arrival_day", leg.day, where);
        try {
            leg.departure_minute = leg.day * kMinutesPerDay + parse_clock(field<std::string>(lg, "departure", where));
            leg.arrival_minute = arrival_day * kMinutesPerDay + parse_clock(field<std::string>(lg, "arrival", where));
        } catch (const FormatError& e) {
            throw FormatError(where + ": " + e.what());
        }
        leg.travel_minutes = field_or<int>(lg, "travel_minutes", leg.arrival_minute - leg.departure_minute, where);
        leg.distance_km = field<double>(lg, "distance_km", where);
        leg.payload_tons = field<double>(lg, "payload_tons", where);
        s.legs.push_back(std::move(leg));
    }

    const auto& prices = section(doc, "prices");
    s.prices.peak_price_per_kw = field<double>(prices, "peak_per_kw", "prices");
    const auto& energy = section(prices, "energy_per_kwh");
    if (energy.contains("default")) s.prices.default_energy_per_kwh = number_list(energy.at("default"), "prices.default");
    if (energy.contains("by_type")) {
        for (const auto& [key, arr] : energy.at("by_type").items())
            s.prices.energy_per_kwh_by_type[parse_type_key(key, "prices")] = number_list(arr, "prices.by_type." + key);
    }

    const auto& params = section(doc, "params");
    s.params.alpha = field<double>(params, "alpha", "params");
    s.params.slack_minutes = field_or<int>(params, "slack_minutes", 0, "params");
    const auto mode = field_or<std::string>(params, "design_mode", "codesign", "params");
    if (mode == "codesign") s.params.design_mode = DesignMode::CoDesign;
    else if (mode == "fixed") s.params.design_mode = DesignMode::FixedInfrastructure;
    else throw FormatError("params.design_mode must be 'codesign' or 'fixed'");
    if (params.contains("fixed_counts")) s.params.fixed_counts = charger_counts_from_json(params.at("fixed_counts"));
    const auto rule = field_or<std::string>(params, "window_rule", "previous_arrival", "params");
    if (rule == "previous_arrival") s.params.window_rule = WindowRule::PreviousArrival;
    else if (rule == "same_leg") s.params.window_rule = WindowRule::SameLeg;
    else throw FormatError("params.window_rule must be 'previous_arrival' or 'same_leg'");
    s.params.peak_includes_tau = field_or<bool>(params, "peak_includes_tau", false, "params");
    s.params.amortize_in_objective = field_or<bool>(params, "amortize_in_objective", false, "params");
    s.params.amortization_years = field_or<double>(params, "amortization_years", 10.0, "params");
    return s;
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["time_grid"] = {{"block_minutes", s.time_grid.block_minutes}, {"num_days", s.time_grid.num_days}};

    json locs = json::array();
    for (const auto& l : s.locations) locs.push_back({{"id", l.id}, {"chargeable", l.chargeable}});
    doc["locations"] = std::move(locs);

    json chargers = json::array();
    for (const auto& c : s.chargers)
        chargers.push_back({{"id", c.id},
                            {"rated_power_kw", c.rated_power_kw},
                            {"capital_cost", c.capital_cost},
                            {"efficiency", c.efficiency}});
    doc["chargers"] = std::move(chargers);

    json trucks = json::array();
    for (const auto& t : s.trucks) {
        json j = {{"id", t.id},
                  {"battery_capacity_kwh", t.battery_capacity_kwh},
                  {"consumption_kwh_per_km_ton", t.consumption_kwh_per_km_ton},
                  {"tare_tons", t.tare_tons}};
        if (t.initial_soe_kwh) j["initial_soe_kwh"] = *t.initial_soe_kwh;
        trucks.push_back(std::move(j));
    }
    doc["trucks"] = std::move(trucks);

    json legs = json::array();
    for (const auto& leg : s.legs) {
        // Departure minutes outside the leg's day cannot be expressed; validation rejects them anyway.
        const int dep_day = leg.day;
        const int arr_day = leg.arrival_minute >= 0 ? leg.arrival_minute / kMinutesPerDay : 0;
        json j = {{"truck", leg.truck_id},
                  {"day", leg.day},
                  {"leg", leg.leg_index},
                  {"origin", leg.origin},
                  {"destination", leg.destination},
                  {"departure", format_clock(leg.departure_minute - dep_day * kMinutesPerDay)},
                  {"arrival", format_clock(leg.arrival_minute - arr_day * kMinutesPerDay)},
                  {"travel_minutes", leg.travel_minutes},
                  {"distance_km", leg.distance_km},
                  {"payload_tons", leg.payload_tons}};
        if (arr_day != leg.day) j["arrival_day"] = arr_day;
        legs.push_back(std::move(j));
    }
    doc["legs"] = std::move(legs);

    json energy = json::object();
    if (!s.prices.default_energy_per_kwh.empty()) energy["default"] = s.prices.default_energy_per_kwh;
    if (!s.prices.energy_per_kwh_by_type.empty()) {
        json by_type = json::object();
        for (const auto& [id, profile] : s.prices.energy_per_kwh_by_type) by_type[std::to_string(id)] = profile;
        energy["by_type"] = std::move(by_type);
    }
    doc["prices"] = {{"peak_per_kw", s.prices.peak_price_per_kw}, {"energy_per_kwh", std::move(energy)}};

    const auto& p = s.params;
    json params = {{"alpha", p.alpha},
                   {"slack_minutes", p.slack_minutes},
                   {"design_mode", p.design_mode == DesignMode::CoDesign ? "codesign" : "fixed"},
                   {"window_rule", p.window_rule == WindowRule::PreviousArrival ? "previous_arrival" : "same_leg"},
                   {"peak_includes_tau", p.peak_includes_tau},
                   {"amortize_in_objective", p.amortize_in_objective},
                   {"amortization_years", p.amortization_years}};
    if (!p.fixed_counts.empty()) params["fixed_counts"] = charger_counts_to_json(p.fixed_counts);
    doc["params"] = std::move(params);
    return doc;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Scenario load_scenario_file(const std::string& path) {
    return scenario_from_json(read_json_file(path));
}

void save_scenario_file(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << scenario_to_json(scenario).dump(2) << '\n';
}

ChargerCounts load_charger_counts_file(const std::string& path) {
    return charger_counts_from_json(read_json_file(path));
}

}  // namespace chargeplan
