#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domain/instance.hpp"
#include "model/linear_model.hpp"

namespace chargeplan {

enum class DiagnosticCode {
    WindowEmpty,           // leg departs a chargeable location but has no charging block
    GuaranteedInfeasible,  // energy cannot cover a leg whatever the schedule
};

const char* to_string(DiagnosticCode code);

struct Diagnostic {
    DiagnosticCode code;
    int leg;
    std::string message;
};

/// Inclusive block range a leg may charge in; empty when first > last.
struct ChargingWindow {
    int first = 0;
    int last = -1;

    bool empty() const { return first > last; }
    int size() const { return empty() ? 0 : last - first + 1; }
};

struct ChargeColumn {
    int leg;
    int block;
    int type;
    int column;
};

/// Maps the semantic variables of the scheduling problem onto model columns.
struct VariableCatalog {
    std::vector<ChargeColumn> charge;                  // Y, in column order
    std::vector<std::pair<int, int>> charge_by_leg;    // [begin, end) into `charge`
    std::vector<std::vector<int>> chargers;            // X[location][type], -1 when absent
    std::vector<int> departure;                        // actual departure block per leg
    std::vector<int> soe_departure, soe_arrival;       // per leg
    std::vector<int> peak;                             // per location, -1 when not chargeable
    std::vector<ChargingWindow> windows;               // per leg

    int num_charge() const { return static_cast<int>(charge.size()); }
};

struct BuiltModel {
    LinearModel model;
    VariableCatalog catalog;
    std::vector<Diagnostic> diagnostics;
};

/// Energy drawn by a leg: distance x effective weight x specific consumption.
/// The effective weight never drops below the truck's tare weight.
double energy_consumption(const LegInfo& leg, const Truck& truck);

ChargingWindow charging_window(const Instance& inst, int leg);

/// Weight applied to capital costs in the objective (1, or the amortisation ratio).
double infrastructure_weight(const Instance& inst);

/// Peak draw multiplier: 1 when peaks are charged on kW, tau when on kWh per block.
double peak_factor(const Instance& inst);

/// Incremental construction of the joint infrastructure/scheduling MILP.
/// Each add_* step is usable on its own so the constraint families can be
/// inspected in isolation; build_problem runs them all in order.
class ProblemBuilder {
public:
    explicit ProblemBuilder(const Instance& inst);

    void add_variables();
    void add_energy_constraints();
    void add_schedule_constraints();
    void add_capacity_constraints();
    void add_peak_epigraph();
    void build_objective();

    BuiltModel finish() &&;
    const LinearModel& model() const { return out_.model; }
    const VariableCatalog& catalog() const { return out_.catalog; }

private:
    bool codesign() const;
    std::vector<Term> charge_energy_terms(int leg) const;
    std::string leg_name(int leg) const;

    const Instance& inst_;
    BuiltModel out_;
    // Charge columns grouped by (location, block) in block order.
    std::vector<std::vector<std::vector<int>>> by_location_block_;
};

BuiltModel build_problem(const Instance& inst);

}  // namespace chargeplan
