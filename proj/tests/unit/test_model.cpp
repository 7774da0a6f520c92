#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "model/builder.hpp"
#include "solver/milp.hpp"
#include "validator/plan.hpp"

using namespace chargeplan;
using namespace testsupport;

namespace {

Instance validated(const Scenario& s) {
    auto v = validate_scenario(s);
    REQUIRE(v.ok());
    return *v.instance;
}

const Row* find_row(const LinearModel& m, const std::string& name) {
    for (const auto& r : m.rows())
        if (r.name == name) return &r;
    return nullptr;
}

double coef(const Row& row, int column) {
    for (const auto& t : row.terms)
        if (t.column == column) return t.coef;
    return 0.0;
}

int charge_column(const VariableCatalog& cat, int leg, int block, int type) {
    for (const auto& c : cat.charge)
        if (c.leg == leg && c.block == block && c.type == type) return c.column;
    return -1;
}

// Fix every charge column to the given pattern and solve what is left.
solver::Solution solve_with_pattern(LinearModel m, const VariableCatalog& cat, const std::vector<int>& on) {
    for (const auto& c : cat.charge) {
        const bool set = std::find(on.begin(), on.end(), c.column) != on.end();
        m.column(c.column).lower = m.column(c.column).upper = set ? 1.0 : 0.0;
    }
    return solver::branch_and_bound(m, {.rel_gap = 0.0});
}

}  // namespace

TEST_CASE("energy consumption is distance x weight x specific consumption") {
    Truck t;
    t.consumption_kwh_per_km_ton = 0.13;
    t.tare_tons = 1.0;
    LegInfo leg;
    leg.distance_km = 100;
    leg.payload_tons = 10;
    CHECK(energy_consumption(leg, t) == doctest::Approx(130.0));
    leg.distance_km = 0;
    CHECK(energy_consumption(leg, t) == 0.0);
    t.consumption_kwh_per_km_ton = 0.10;
    leg.distance_km = 250;
    leg.payload_tons = 16;
    CHECK(energy_consumption(leg, t) == doctest::Approx(400.0));
}

TEST_CASE("empty legs still consume at tare weight") {
    Truck t;
    t.consumption_kwh_per_km_ton = 0.1;
    t.tare_tons = 8.0;
    LegInfo leg;
    leg.distance_km = 50;
    leg.payload_tons = 0;
    CHECK(energy_consumption(leg, t) == doctest::Approx(40.0));
    leg.payload_tons = 12;
    CHECK(energy_consumption(leg, t) == doctest::Approx(60.0));
}

TEST_CASE("energy balance rows") {
    Scenario s = blank_scenario(15);
    add_truck(s, "T1", 300, 0.13);
    add_leg(s, "T1", 0, 1, "DC", "S", "01:00", "03:00", 100, 10);
    const Instance inst = validated(s);
    const auto built = build_problem(inst);
    const auto& cat = built.catalog;
    const Row* bal = find_row(built.model, "bal_T1_d0_l1");
    REQUIRE(bal);
    CHECK(bal->relation == Relation::Equal);
    CHECK(bal->rhs == doctest::Approx(-130.0));
    CHECK(coef(*bal, cat.soe_arrival[0]) == 1.0);
    CHECK(coef(*bal, cat.soe_departure[0]) == -1.0);
    // A 180 kW block of 15 minutes banks 45 kWh.
    const int y = charge_column(cat, 0, 2, 1);
    REQUIRE(y >= 0);
    CHECK(coef(*bal, y) == doctest::Approx(-45.0));

    // Without charging the arrival energy is the departure energy less consumption.
    auto sol = solve_with_pattern(built.model, cat, {});
    REQUIRE(sol.status == solver::SolveStatus::Optimal);
    CHECK(sol.values[cat.soe_arrival[0]] == doctest::Approx(300.0 - 130.0));
}

TEST_CASE("departure follows the last charging block") {
    Scenario s = blank_scenario(15);
    add_truck(s, "T1", 300, 0.1);
    add_leg(s, "T1", 0, 1, "DC", "S", "04:00", "05:00", 50, 10);
    add_leg(s, "T1", 0, 2, "S", "DC", "06:00", "07:00", 50, 10);
    s.trucks[0].initial_soe_kwh = 200.0;  // room for the forced charge below
    s.params.slack_minutes = 30;
    const Instance inst = validated(s);
    const auto built = build_problem(inst);
    const auto& cat = built.catalog;
    const Row* after = find_row(built.model, "after_T1_d0_l1_t12");
    REQUIRE(after);
    CHECK(after->relation == Relation::GreaterEqual);
    CHECK(coef(*after, cat.departure[0]) == 1.0);
    for (int r = 0; r < inst.num_types(); ++r) CHECK(coef(*after, charge_column(cat, 0, 12, r)) == -13.0);

    // Departure bounds: chain lower bound, scheduled + slack upper bound.
    const auto& dep1 = built.model.column(cat.departure[0]);
    const auto& dep2 = built.model.column(cat.departure[1]);
    CHECK(dep1.lower == 0.0);
    CHECK(dep1.upper == 16 + 2);
    CHECK(dep2.lower == dep1.lower + inst.leg(0).travel_blocks);
    CHECK(dep2.upper == 24 + 2);

    auto sol = solve_with_pattern(built.model, cat, {charge_column(cat, 0, 12, 0)});
    REQUIRE(sol.has_solution());
    CHECK(sol.values[cat.departure[0]] >= 13.0 - 1e-9);
}

TEST_CASE("zero slack and a one-block window force the charge at the scheduled departure") {
    Scenario s = blank_scenario(60);
    s.chargers = {{1, 60.0, 20000.0, 0.98}};
    add_truck(s, "T1", 100, 0.1);
    s.trucks[0].initial_soe_kwh = 0.0;
    add_leg(s, "T1", 0, 1, "DC", "S", "01:00", "02:00", 10, 10);
    const Instance inst = validated(s);
    const auto built = build_problem(inst);
    REQUIRE(built.catalog.num_charge() == 1);
    auto brute = solver::brute_force_enumerate(built.model);
    REQUIRE(brute.status == solver::SolveStatus::Optimal);
    CHECK(brute.values[built.catalog.charge[0].column] == 1.0);
    CHECK(brute.values[built.catalog.departure[0]] == doctest::Approx(inst.leg(0).departure_block));
}

TEST_CASE("a 500 kWh battery cannot cover 300 + 300 kWh without charging") {
    Scenario s = blank_scenario(60);
    s.locations[1].chargeable = true;
    s.chargers = {{1, 60.0, 20000.0, 0.98}, {2, 180.0, 50000.0, 0.98}};
    add_truck(s, "T1", 500, 0.3);
    add_leg(s, "T1", 0, 1, "DC", "S", "01:00", "02:00", 100, 10);
    add_leg(s, "T1", 0, 2, "S", "DC", "03:00", "04:00", 100, 10);

    s.params.design_mode = DesignMode::FixedInfrastructure;
    auto none = build_problem(validated(s));
    CHECK(solver::brute_force_enumerate(none.model).status == solver::SolveStatus::Infeasible);

    s.params.design_mode = DesignMode::CoDesign;
    const Instance inst = validated(s);
    auto built = build_problem(inst);
    auto brute = solver::brute_force_enumerate(built.model);
    REQUIRE(brute.status == solver::SolveStatus::Optimal);
    double charged = 0.0;
    for (const auto& c : built.catalog.charge)
        if (c.leg == 1 && brute.values[c.column] > 0.5) charged += inst.charger(c.type).rated_power_kw;
    CHECK(charged >= 100.0);
}

TEST_CASE("fixed infrastructure without chargers is infeasible when charging is needed") {
    Scenario s = blank_scenario(15);
    add_truck(s, "T1", 100, 0.1);
    add_leg(s, "T1", 0, 1, "DC", "S", "04:00", "05:00", 100, 20);
    s.params.design_mode = DesignMode::FixedInfrastructure;
    auto built = build_problem(validated(s));
    CHECK(solver::branch_and_bound(built.model).status == solver::SolveStatus::Infeasible);
}

TEST_CASE("two trucks and one charger cannot share a block") {
    Scenario s = blank_scenario(60);
    s.chargers = {{1, 60.0, 20000.0, 0.98}};
    for (const char* id : {"A", "B"}) {
        add_truck(s, id, 200, 0.1);
        s.trucks.back().initial_soe_kwh = 100.0;
        add_leg(s, id, 0, 1, "DC", "S", "01:00", "02:00", 10, 10);
    }
    s.params.design_mode = DesignMode::FixedInfrastructure;
    s.params.fixed_counts = {{"DC", {{1, 1}}}};
    const auto built = build_problem(validated(s));
    REQUIRE(built.catalog.num_charge() == 2);
    const int a = built.catalog.charge[0].column, b = built.catalog.charge[1].column;
    int feasible = 0;
    for (int mask = 0; mask < 4; ++mask) {
        std::vector<int> on;
        if (mask & 1) on.push_back(a);
        if (mask & 2) on.push_back(b);
        const bool ok = solve_with_pattern(built.model, built.catalog, on).has_solution();
        CHECK(ok == (mask != 3));
        feasible += ok;
    }
    CHECK(feasible == 3);
}

TEST_CASE("a truck draws from at most one charger per block") {
    Scenario s = blank_scenario(60);
    s.chargers = {{1, 60.0, 20000.0, 0.98}, {2, 180.0, 50000.0, 0.98}};
    add_truck(s, "T1", 500, 0.1);
    s.trucks[0].initial_soe_kwh = 0.0;
    add_leg(s, "T1", 0, 1, "DC", "S", "01:00", "02:00", 10, 10);
    const auto built = build_problem(validated(s));
    const Row* one = find_row(built.model, "one_T1_d0_l1_t0");
    REQUIRE(one);
    CHECK(one->terms.size() == 2);
    CHECK(one->rhs == 1.0);
    auto both = solve_with_pattern(built.model, built.catalog, {built.catalog.charge[0].column, built.catalog.charge[1].column});
    CHECK_FALSE(both.has_solution());
}

TEST_CASE("peak epigraph") {
    SUBCASE("a single 720 kW block costs 360 at 0.5 per kW") {
        Scenario s = blank_scenario(15);
        s.chargers = {{4, 720.0, 150000.0, 0.97}};
        add_truck(s, "T1", 300, 0.1);
        s.trucks[0].initial_soe_kwh = 50.0;
        add_leg(s, "T1", 0, 1, "DC", "S", "00:15", "02:00", 100, 10);
        const auto built = build_problem(validated(s));
        auto sol = solver::branch_and_bound(built.model, {.rel_gap = 0.0});
        REQUIRE(sol.status == solver::SolveStatus::Optimal);
        CHECK(sol.values[built.catalog.peak[0]] == doctest::Approx(360.0));
    }
    SUBCASE("no charging leaves the peak at zero") {
        Scenario s = blank_scenario(15);
        add_truck(s, "T1", 300, 0.1);
        add_leg(s, "T1", 0, 1, "DC", "S", "04:00", "05:00", 10, 10);
        const auto built = build_problem(validated(s));
        auto sol = solver::branch_and_bound(built.model, {.rel_gap = 0.0});
        REQUIRE(sol.status == solver::SolveStatus::Optimal);
        CHECK(sol.values[built.catalog.peak[0]] == doctest::Approx(0.0));
    }
    SUBCASE("staggered 180 + 60 kW agrees with a literal scan") {
        Scenario s = blank_scenario(15);
        s.chargers = {{1, 60.0, 20000.0, 0.98}, {2, 180.0, 50000.0, 0.98}};
        for (const char* id : {"A", "B"}) {
            add_truck(s, id, 300, 0.1);
            s.trucks.back().initial_soe_kwh = 100.0;
            add_leg(s, id, 0, 1, "DC", "S", "01:00", "02:00", 10, 10);
        }
        const Instance inst = validated(s);
        const auto built = build_problem(inst);
        const auto& cat = built.catalog;
        const std::vector<int> on = {charge_column(cat, 0, 0, 1), charge_column(cat, 0, 1, 1), charge_column(cat, 1, 1, 0)};
        auto sol = solve_with_pattern(built.model, cat, on);
        REQUIRE(sol.status == solver::SolveStatus::Optimal);
        CHECK(sol.values[cat.peak[0]] == doctest::Approx(240.0 * 0.5));
        const auto plan = decode_plan(inst, built, sol);
        CHECK(recompute_costs(inst, plan).peak_kw[0] == doctest::Approx(240.0));
    }
}

TEST_CASE("objective coefficients") {
    Scenario s = blank_scenario(15);
    add_truck(s, "T1", 300, 0.1);
    add_leg(s, "T1", 0, 1, "DC", "S", "04:00", "05:00", 10, 10);
    const Instance inst = validated(s);
    auto built = build_problem(inst);
    const auto& cat = built.catalog;
    CHECK(built.model.column(charge_column(cat, 0, 3, 1)).cost == doctest::Approx(0.25 * 180 / 0.98 * 0.20));
    CHECK(built.model.column(charge_column(cat, 0, 3, 1)).cost == doctest::Approx(9.1837).epsilon(1e-4));
    CHECK(built.model.column(cat.chargers[0][0]).cost == 20000.0);
    CHECK(built.model.column(cat.peak[0]).cost == 1.0);

    s.params.alpha = 0.0;
    auto no_peak = build_problem(validated(s));
    CHECK(no_peak.model.column(no_peak.catalog.peak[0]).cost == 0.0);

    s.params.alpha = 1.0;
    s.params.design_mode = DesignMode::FixedInfrastructure;
    s.params.fixed_counts = {{"DC", {{1, 2}, {3, 1}}}};
    auto fixed = build_problem(validated(s));
    CHECK(fixed.model.objective_offset() == 2 * 20000.0 + 90000.0);

    s.params.amortize_in_objective = true;
    s.params.amortization_years = 10.0;
    auto amortised = build_problem(validated(s));
    CHECK(amortised.model.objective_offset() == doctest::Approx((2 * 20000.0 + 90000.0) / 3650.0));
}

TEST_CASE("an empty scenario gives an empty model") {
    auto built = build_problem(validated(blank_scenario()));
    CHECK(built.model.num_rows() == 0);
    auto sol = solver::branch_and_bound(built.model);
    REQUIRE(sol.status == solver::SolveStatus::Optimal);
    CHECK(sol.objective == 0.0);
}

TEST_CASE("two-truck fixture column count") {
    Scenario s = load_scenario_file(fixture("two_truck_day.json"));
    const auto built = build_problem(validated(s));
    const auto& cat = built.catalog;
    // 5 window blocks at DEPOT x 2 types, 2 counts, 8 departures, 8 + 8 energies, 1 peak.
    CHECK(cat.num_charge() == 10);
    CHECK(built.model.num_columns() == 10 + 2 + 8 + 8 + 8 + 1);
    CHECK(built.model.num_integer() == 12);

    s.params.design_mode = DesignMode::FixedInfrastructure;
    s.params.fixed_counts = {{"DEPOT", {{1, 2}, {2, 1}}}};
    const auto fixed = build_problem(validated(s));
    CHECK(fixed.model.num_columns() == 10 + 8 + 8 + 8 + 1);
    CHECK(fixed.model.num_integer() == 10);
    for (const auto& per_loc : fixed.catalog.chargers)
        for (int col : per_loc) CHECK(col == -1);
}

TEST_CASE("charging windows") {
    Scenario s = load_scenario_file(fixture("two_truck_day.json"));
    const Instance inst = validated(s);
    // T1: first leg departs 01:00, third leg departs 08:00 after arriving at 06:00.
    CHECK(charging_window(inst, 0).first == 0);
    CHECK(charging_window(inst, 0).last == 0);
    CHECK(charging_window(inst, 2).first == 6);
    CHECK(charging_window(inst, 2).last == 7);

    s.params.slack_minutes = 60;
    const Instance slack = validated(s);
    CHECK(charging_window(slack, 2).last == 8);

    s.params.window_rule = WindowRule::SameLeg;
    const Instance literal = validated(s);
    CHECK(charging_window(literal, 2).first == 9);
    CHECK(charging_window(literal, 2).last == 9);
}

TEST_CASE("hopeless legs are diagnosed") {
    Scenario s = blank_scenario(15);
    add_truck(s, "T1", 100, 0.1);
    add_leg(s, "T1", 0, 1, "DC", "S", "04:00", "05:00", 100, 20);
    add_leg(s, "T1", 0, 2, "S", "DC", "06:00", "07:00", 100, 20);
    const auto built = build_problem(validated(s));
    const bool flagged = std::any_of(built.diagnostics.begin(), built.diagnostics.end(), [](const Diagnostic& d) {
        return d.code == DiagnosticCode::GuaranteedInfeasible && d.leg == 1;
    });
    CHECK(flagged);
}

TEST_CASE("model construction is deterministic") {
    const Scenario s = load_scenario_file(fixture("depot.json"));
    const Instance inst = validated(s);
    const auto a = build_problem(inst);
    const auto b = build_problem(inst);
    CHECK(a.model == b.model);
    std::ostringstream la, lb;
    write_lp_format(a.model, la);
    write_lp_format(b.model, lb);
    CHECK(la.str() == lb.str());
    CHECK(la.str().find("Minimize") != std::string::npos);
}

TEST_CASE("columns exist only inside charging windows") {
    const Instance inst = validated(load_scenario_file(fixture("depot.json")));
    const auto built = build_problem(inst);
    for (const auto& c : built.catalog.charge) {
        const auto w = charging_window(inst, c.leg);
        CHECK(c.block >= w.first);
        CHECK(c.block <= w.last);
        CHECK(inst.location(inst.leg(c.leg).origin).chargeable);
        CHECK(built.model.column(c.column).integer);
        CHECK(built.model.column(c.column).upper == 1.0);
    }
}
