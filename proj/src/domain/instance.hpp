#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domain/types.hpp"

namespace chargeplan {

enum class IssueCode {
    ChainBroken,
    TimeOffGrid,
    UnknownReference,
    NegativeQuantity,
    InvalidValue,
    DuplicateId,
};

const char* to_string(IssueCode code);

struct Issue {
    IssueCode code;
    std::string message;
};

enum class RoundingMode {
    Conservative,  // departures down, arrivals and travel times up
    Strict,        // off-grid times are reported as TimeOffGrid
};

/// Snap every leg time onto the block grid. Idempotent.
Scenario quantize_times(const Scenario& scenario, RoundingMode mode = RoundingMode::Conservative);

/// A leg with all references resolved to indices and times expressed in blocks
/// from the start of the analysis period.
struct LegInfo {
    int truck = 0;
    int day = 0;
    int position = 0;  // 0-based position in the day's tour
    int origin = 0;
    int destination = 0;
    int departure_block = 0;
    int arrival_block = 0;
    int travel_blocks = 0;
    double distance_km = 0.0;
    double payload_tons = 0.0;
    int leg_index = 1;
};

/// Validated, immutable view of a scenario. Everything downstream consumes this
/// rather than the raw file model.
class Instance {
public:
    const Scenario& scenario() const { return scenario_; }
    const TimeGrid& grid() const { return scenario_.time_grid; }
    const ScenarioParams& params() const { return scenario_.params; }

    int num_trucks() const { return static_cast<int>(scenario_.trucks.size()); }
    int num_locations() const { return static_cast<int>(scenario_.locations.size()); }
    int num_types() const { return static_cast<int>(scenario_.chargers.size()); }
    int num_legs() const { return static_cast<int>(legs_.size()); }

    const std::vector<LegInfo>& legs() const { return legs_; }
    const LegInfo& leg(int g) const { return legs_[g]; }
    /// Leg indices of one truck's tour on one day, in driving order.
    const std::vector<int>& tour(int truck, int day) const { return tours_[truck][day]; }

    const Truck& truck(int k) const { return scenario_.trucks[k]; }
    const Location& location(int i) const { return scenario_.locations[i]; }
    /// Charger types are kept sorted by id; `r` is a position, not an id.
    const ChargerType& charger(int r) const { return scenario_.chargers[r]; }

    int slack_blocks() const { return slack_blocks_; }
    double initial_soe(int truck) const { return initial_soe_[truck]; }
    double energy_price(int type, int block) const { return prices_[type][block]; }
    int fixed_count(int location, int type) const { return fixed_counts_[location][type]; }

    std::optional<int> location_index(const std::string& id) const;
    std::optional<int> truck_index(const std::string& id) const;
    std::optional<int> type_index(int charger_id) const;

private:
    friend struct InstanceBuilder;

    Scenario scenario_;
    std::vector<LegInfo> legs_;
    std::vector<std::vector<std::vector<int>>> tours_;
    std::vector<std::vector<double>> prices_;
    std::vector<std::vector<int>> fixed_counts_;
    std::vector<double> initial_soe_;
    int slack_blocks_ = 0;
};

struct ValidationResult {
    std::optional<Instance> instance;
    std::vector<Issue> issues;

    bool ok() const { return instance.has_value(); }
};

/// Same scenario on a different block length. Price profiles are resampled by
/// the minute each new block starts at; leg times stay in minutes.
Scenario with_block_minutes(const Scenario& scenario, int minutes);

/// Check every invariant of the scenario and resolve it into an Instance.
/// All violations are collected; nothing stops at the first one.
ValidationResult validate_scenario(const Scenario& raw,
                                   RoundingMode mode = RoundingMode::Conservative);

}  // namespace chargeplan
