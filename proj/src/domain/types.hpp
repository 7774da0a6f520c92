#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chargeplan {

constexpr int kMinutesPerDay = 1440;

/// Uniform discretisation of the analysis period into fixed-length blocks.
struct TimeGrid {
    int block_minutes = 15;
    int num_days = 1;

    double block_hours() const { return block_minutes / 60.0; }
    int blocks_per_day() const { return block_minutes > 0 ? kMinutesPerDay / block_minutes : 0; }
    int total_blocks() const { return blocks_per_day() * num_days; }
    int day_start_block(int day) const { return day * blocks_per_day(); }

    bool operator==(const TimeGrid&) const = default;
};

struct ChargerType {
    int id = 0;
    double rated_power_kw = 0.0;
    double capital_cost = 0.0;
    double efficiency = 1.0;

    bool operator==(const ChargerType&) const = default;
};

struct Truck {
    std::string id;
    double battery_capacity_kwh = 0.0;
    double consumption_kwh_per_km_ton = 0.0;
    // Unset means the truck starts every day with a full battery.
    std::optional<double> initial_soe_kwh;
    // Lower bound on the weight used for consumption; keeps empty legs from being free.
    double tare_tons = 1.0;

    bool operator==(const Truck&) const = default;
};

struct Location {
    std::string id;
    bool chargeable = true;

    bool operator==(const Location&) const = default;
};

/// One itinerary leg. Times are minutes from the start of the analysis period.
struct TripLeg {
    std::string truck_id;
    int day = 0;
    int leg_index = 1;  // 1-based position within the truck's tour of that day
    std::string origin;
    std::string destination;
    int departure_minute = 0;
    int arrival_minute = 0;
    int travel_minutes = 0;
    double distance_km = 0.0;
    double payload_tons = 0.0;

    bool operator==(const TripLeg&) const = default;
};

/// Energy prices keyed by charger type id. Each profile holds either one day of
/// blocks (repeated every day) or one value per block of the whole period.
struct PriceSchedule {
    double peak_price_per_kw = 0.0;
    std::vector<double> default_energy_per_kwh;
    std::map<int, std::vector<double>> energy_per_kwh_by_type;

    bool operator==(const PriceSchedule&) const = default;
};

enum class DesignMode { CoDesign, FixedInfrastructure };

/// Which blocks a leg may charge in before departing.
enum class WindowRule {
    PreviousArrival,  // from the arrival of the previous leg (day start for the first leg)
    SameLeg,          // literal reading: between this leg's arrival and departure + slack
};

/// location id -> charger type id -> number of installed chargers
using ChargerCounts = std::map<std::string, std::map<int, int>>;

struct ScenarioParams {
    double alpha = 1.0;
    int slack_minutes = 0;
    DesignMode design_mode = DesignMode::CoDesign;
    ChargerCounts fixed_counts;
    WindowRule window_rule = WindowRule::PreviousArrival;
    bool peak_includes_tau = false;
    bool amortize_in_objective = false;
    double amortization_years = 10.0;

    bool operator==(const ScenarioParams&) const = default;
};

/// Problem instance as read from disk; string references are not yet resolved.
struct Scenario {
    TimeGrid time_grid;
    std::vector<Location> locations;
    std::vector<ChargerType> chargers;
    std::vector<Truck> trucks;
    std::vector<TripLeg> legs;
    PriceSchedule prices;
    ScenarioParams params;

    bool operator==(const Scenario&) const = default;
};

}  // namespace chargeplan
