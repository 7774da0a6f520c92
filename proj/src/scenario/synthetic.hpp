#pragma once

#include <cstdint>

#include "domain/types.hpp"

namespace chargeplan {

/// The five charger types of the reference case study (60 to 1180 kW).
std::vector<ChargerType> default_charger_catalog();

/// Day-ahead style time-of-use price per block of one day: expensive in the
/// morning and early evening, cheap otherwise.
std::vector<double> default_energy_prices(int block_minutes);

struct SyntheticOptions {
    std::uint64_t seed = 1;
    int trucks = 3;
    int locations = 5;  // one depot plus retailers
    int days = 2;
    double tightness = 0.5;  // 0 gives the narrowest dwell windows
    int block_minutes = 15;
};

/// Depot-based delivery itineraries: each truck runs two round trips a day from
/// the depot, DC -> retailer -> DC -> retailer -> DC. Deterministic per seed.
/// Throws std::invalid_argument on non-positive sizes or tightness outside [0, 1].
Scenario generate_synthetic(const SyntheticOptions& options);

}  // namespace chargeplan
