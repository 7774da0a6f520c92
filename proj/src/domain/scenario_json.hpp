#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "domain/types.hpp"

namespace chargeplan {

/// Structural problem in an input document (bad JSON, wrong types, malformed times).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& scenario, const std::string& path);

/// Explicit infrastructure file: {"<location>": {"<charger type id>": count}}.
ChargerCounts charger_counts_from_json(const nlohmann::json& doc);
nlohmann::json charger_counts_to_json(const ChargerCounts& counts);
ChargerCounts load_charger_counts_file(const std::string& path);

/// "HH:MM" -> minutes after midnight.
int parse_clock(const std::string& text);
std::string format_clock(int minutes_after_midnight);

nlohmann::json read_json_file(const std::string& path);

}  // namespace chargeplan
