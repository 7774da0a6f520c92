#pragma once

#include <string>
#include <variant>

#include "domain/instance.hpp"

namespace chargeplan {

/// `count` chargers of one type at the location with the most departures.
struct MainDepotOnly {
    int count = 0;
    int charger_id = 0;
};

/// Per location, enough chargers of one type that the naive schedule (every truck
/// charges from arrival until full or until it must leave) never queues.
struct PeakDemandCover {
    int charger_id = 0;
};

struct ExplicitDesign {
    ChargerCounts counts;
};

using DesignPolicy = std::variant<MainDepotOnly, PeakDemandCover, ExplicitDesign>;

/// "main-depot-only:N:TYPE", "peak-demand-cover:TYPE" or "explicit:PATH".
/// Throws std::invalid_argument on malformed text.
DesignPolicy parse_policy(const std::string& text);

/// Location index with the most departing legs among chargeable locations; ties go
/// to the earlier location. -1 when no chargeable location has a departure.
int busiest_location(const Instance& inst);

/// Throws std::invalid_argument when the policy names an unknown charger type.
ChargerCounts rule_based_design(const Instance& inst, const DesignPolicy& policy);

}  // namespace chargeplan
