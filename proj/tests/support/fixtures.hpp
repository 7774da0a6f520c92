#pragma once

#include <string>

#include "domain/scenario_json.hpp"
#include "domain/types.hpp"
#include "scenario/synthetic.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(CHARGEPLAN_FIXTURE_DIR) + "/" + name; }

// Depot "DC" (chargeable) and shop "S" (not), the five catalog chargers, flat
// energy price 0.2 and peak price 0.5. No trucks or legs.
inline chargeplan::Scenario blank_scenario(int block_minutes = 15, int days = 1) {
    chargeplan::Scenario s;
    s.time_grid = {block_minutes, days};
    s.locations = {{"DC", true}, {"S", false}};
    s.chargers = chargeplan::default_charger_catalog();
    s.prices.peak_price_per_kw = 0.5;
    s.prices.default_energy_per_kwh.assign(chargeplan::kMinutesPerDay / block_minutes, 0.2);
    return s;
}

inline void add_truck(chargeplan::Scenario& s, const std::string& id, double battery, double consumption,
                      double tare = 1.0) {
    chargeplan::Truck t;
    t.id = id;
    t.battery_capacity_kwh = battery;
    t.consumption_kwh_per_km_ton = consumption;
    t.tare_tons = tare;
    s.trucks.push_back(t);
}

inline void add_leg(chargeplan::Scenario& s, const std::string& truck, int day, int index, const std::string& from,
                    const std::string& to, const std::string& dep, const std::string& arr, double km, double payload) {
    chargeplan::TripLeg leg;
    leg.truck_id = truck;
    leg.day = day;
    leg.leg_index = index;
    leg.origin = from;
    leg.destination = to;
    leg.departure_minute = day * chargeplan::kMinutesPerDay + chargeplan::parse_clock(dep);
    leg.arrival_minute = day * chargeplan::kMinutesPerDay + chargeplan::parse_clock(arr);
    leg.travel_minutes = leg.arrival_minute - leg.departure_minute;
    leg.distance_km = km;
    leg.payload_tons = payload;
    s.legs.push_back(leg);
}

}  // namespace testsupport
