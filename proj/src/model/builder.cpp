#include "model/builder.hpp"

#include <algorithm>
#include <cctype>

namespace chargeplan {

const char* to_string(DiagnosticCode code) {
    switch (code) {
        case DiagnosticCode::WindowEmpty: return "WindowEmpty";
        case DiagnosticCode::GuaranteedInfeasible: return "GuaranteedInfeasible";
    }
    return "?";
}

namespace {

// LP-format friendly identifier fragment.
std::string token(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

}  // namespace

double energy_consumption(const LegInfo& leg, const Truck& truck) {
    return leg.distance_km * std::max(leg.payload_tons, truck.tare_tons) * truck.consumption_kwh_per_km_ton;
}

ChargingWindow charging_window(const Instance& inst, int g) {
    const LegInfo& leg = inst.leg(g);
    const int beta = inst.slack_blocks();
    ChargingWindow w;
    if (inst.params().window_rule == WindowRule::SameLeg) {
        w.first = std::min(leg.arrival_block, leg.departure_block + beta);
        w.last = std::max(leg.arrival_block, leg.departure_block + beta) - 1;
    } else {
        if (leg.position == 0) {
            w.first = inst.grid().day_start_block(leg.day);
        } else {
            const auto& tour = inst.tour(leg.truck, leg.day);
            w.first = inst.leg(tour[leg.position - 1]).arrival_block;
        }
        w.last = leg.departure_block + beta - 1;
    }
    w.first = std::max(w.first, 0);
    w.last = std::min(w.last, inst.grid().total_blocks() - 1);
    return w;
}

double infrastructure_weight(const Instance& inst) {
    const auto& p = inst.params();
    if (!p.amortize_in_objective) return 1.0;
    return inst.grid().num_days / (p.amortization_years * 365.0);
}

double peak_factor(const Instance& inst) {
    return inst.params().peak_includes_tau ? inst.grid().block_hours() : 1.0;
}

ProblemBuilder::ProblemBuilder(const Instance& inst) : inst_(inst) {}

bool ProblemBuilder::codesign() const { return inst_.params().design_mode == DesignMode::CoDesign; }

std::string ProblemBuilder::leg_name(int g) const {
    const LegInfo& leg = inst_.leg(g);
    return token(inst_.truck(leg.truck).id) + "_d" + std::to_string(leg.day) + "_l" + std::to_string(leg.leg_index);
}

std::vector<Term> ProblemBuilder::charge_energy_terms(int g) const {
    const auto& cat = out_.catalog;
    const double tau = inst_.grid().block_hours();
    std::vector<Term> terms;
    for (int e = cat.charge_by_leg[g].first; e < cat.charge_by_leg[g].second; ++e) {
        const auto& c = cat.charge[e];
        terms.push_back({c.column, tau * inst_.charger(c.type).rated_power_kw});
    }
    return terms;
}

void ProblemBuilder::add_variables() {
    auto& model = out_.model;
    auto& cat = out_.catalog;
    const int n_legs = inst_.num_legs();
    const int n_locs = inst_.num_locations();
    const int n_types = inst_.num_types();
    const int horizon = inst_.grid().total_blocks();

    cat.windows.resize(n_legs);
    by_location_block_.assign(n_locs, std::vector<std::vector<int>>(horizon));
    std::vector<std::vector<int>> cover(n_locs, std::vector<int>(horizon, 0));
    for (int g = 0; g < n_legs; ++g) {
        cat.windows[g] = charging_window(inst_, g);
        const LegInfo& leg = inst_.leg(g);
        if (!inst_.location(leg.origin).chargeable) continue;
        for (int t = cat.windows[g].first; t <= cat.windows[g].last; ++t) ++cover[leg.origin][t];
    }

    cat.chargers.assign(n_locs, std::vector<int>(n_types, -1));
    if (codesign()) {
        for (int i = 0; i < n_locs; ++i) {
            if (!inst_.location(i).chargeable) continue;
            const int ub = *std::max_element(cover[i].begin(), cover[i].end());
            for (int r = 0; r < n_types; ++r)
                cat.chargers[i][r] = model.add_column(
                    "X_" + token(inst_.location(i).id) + "_r" + std::to_string(inst_.charger(r).id), 0.0, ub, 0.0, true);
        }
    }

    cat.charge_by_leg.assign(n_legs, {0, 0});
    for (int g = 0; g < n_legs; ++g) {
        const LegInfo& leg = inst_.leg(g);
        cat.charge_by_leg[g].first = cat.num_charge();
        if (inst_.location(leg.origin).chargeable) {
            for (int t = cat.windows[g].first; t <= cat.windows[g].last; ++t) {
                for (int r = 0; r < n_types; ++r) {
                    int col = model.add_binary("Y_" + leg_name(g) + "_t" + std::to_string(t) + "_r" +
                                                   std::to_string(inst_.charger(r).id),
                                               0.0);
                    cat.charge.push_back({g, t, r, col});
                    by_location_block_[leg.origin][t].push_back(cat.num_charge() - 1);
                }
            }
        }
        cat.charge_by_leg[g].second = cat.num_charge();
    }

    cat.departure.resize(n_legs);
    for (int g = 0; g < n_legs; ++g) {
        const LegInfo& leg = inst_.leg(g);
        double lower = inst_.grid().day_start_block(leg.day);
        if (leg.position > 0) {
            const auto& tour = inst_.tour(leg.truck, leg.day);
            const int prev = tour[leg.position - 1];
            lower = model.column(cat.departure[prev]).lower + inst_.leg(prev).travel_blocks;
        }
        cat.departure[g] = model.add_column("tdep_" + leg_name(g), lower,
                                            leg.departure_block + inst_.slack_blocks(), 0.0);
    }

    cat.soe_departure.resize(n_legs);
    for (int g = 0; g < n_legs; ++g) {
        const LegInfo& leg = inst_.leg(g);
        const double cap = inst_.truck(leg.truck).battery_capacity_kwh;
        if (leg.position == 0) {
            const double e0 = inst_.initial_soe(leg.truck);
            cat.soe_departure[g] = model.add_column("Edep_" + leg_name(g), e0, e0, 0.0);
        } else {
            cat.soe_departure[g] = model.add_column("Edep_" + leg_name(g), 0.0, cap, 0.0);
        }
    }
    cat.soe_arrival.resize(n_legs);
    for (int g = 0; g < n_legs; ++g) {
        const double cap = inst_.truck(inst_.leg(g).truck).battery_capacity_kwh;
        cat.soe_arrival[g] = model.add_column("Earr_" + leg_name(g), 0.0, cap, 0.0);
    }

    double max_power = 0.0;
    for (int r = 0; r < n_types; ++r) max_power = std::max(max_power, inst_.charger(r).rated_power_kw);
    const double unit = inst_.scenario().prices.peak_price_per_kw * peak_factor(inst_) * max_power;
    cat.peak.assign(n_locs, -1);
    for (int i = 0; i < n_locs; ++i) {
        if (!inst_.location(i).chargeable) continue;
        const int ub = *std::max_element(cover[i].begin(), cover[i].end());
        cat.peak[i] = model.add_column("Cpeak_" + token(inst_.location(i).id), 0.0, unit * ub, 0.0);
    }

    // Diagnostics: empty windows, and legs no schedule can power.
    for (int k = 0; k < inst_.num_trucks(); ++k) {
        const double cap = inst_.truck(k).battery_capacity_kwh;
        for (int d = 0; d < inst_.grid().num_days; ++d) {
            double reach = inst_.initial_soe(k);
            for (int g : inst_.tour(k, d)) {
                const LegInfo& leg = inst_.leg(g);
                const bool can_charge = cat.charge_by_leg[g].second > cat.charge_by_leg[g].first;
                if (inst_.location(leg.origin).chargeable && cat.windows[g].empty())
                    out_.diagnostics.push_back({DiagnosticCode::WindowEmpty, g,
                                                "leg " + leg_name(g) + " has no charging block"});
                const double avail = can_charge ? cap : reach;
                const double need = energy_consumption(leg, inst_.truck(k));
                if (avail + 1e-9 < need)
                    out_.diagnostics.push_back({DiagnosticCode::GuaranteedInfeasible, g,
                                                "leg " + leg_name(g) + " needs " + std::to_string(need) +
                                                    " kWh but at most " + std::to_string(avail) + " kWh is available"});
                reach = std::max(0.0, avail - need);
            }
        }
    }
}

void ProblemBuilder::add_energy_constraints() {
    auto& model = out_.model;
    const auto& cat = out_.catalog;
    for (int g = 0; g < inst_.num_legs(); ++g) {
        const LegInfo& leg = inst_.leg(g);
        const Truck& truck = inst_.truck(leg.truck);
        auto charge = charge_energy_terms(g);

        std::vector<Term> balance = {{cat.soe_arrival[g], 1.0}, {cat.soe_departure[g], -1.0}};
        for (const auto& t : charge) balance.push_back({t.column, -t.coef});
        model.add_row("bal_" + leg_name(g), balance, Relation::Equal, -energy_consumption(leg, truck));

        std::vector<Term> battery = {{cat.soe_departure[g], 1.0}};
        battery.insert(battery.end(), charge.begin(), charge.end());
        model.add_row("batt_" + leg_name(g), battery, Relation::LessEqual, truck.battery_capacity_kwh);

        if (leg.position > 0) {
            const int prev = inst_.tour(leg.truck, leg.day)[leg.position - 1];
            model.add_row("soe_" + leg_name(g), {{cat.soe_departure[g], 1.0}, {cat.soe_arrival[prev], -1.0}},
                          Relation::Equal, 0.0);
        }
    }
}

void ProblemBuilder::add_schedule_constraints() {
    auto& model = out_.model;
    const auto& cat = out_.catalog;
    for (int g = 0; g < inst_.num_legs(); ++g) {
        const auto [begin, end] = cat.charge_by_leg[g];
        for (int e = begin; e < end;) {
            const int t = cat.charge[e].block;
            std::vector<Term> terms = {{cat.departure[g], 1.0}};
            for (; e < end && cat.charge[e].block == t; ++e) terms.push_back({cat.charge[e].column, -(t + 1.0)});
            model.add_row("after_" + leg_name(g) + "_t" + std::to_string(t), terms, Relation::GreaterEqual, 0.0);
        }
    }
    for (int g = 0; g < inst_.num_legs(); ++g) {
        const LegInfo& leg = inst_.leg(g);
        if (leg.position == 0) continue;
        const int prev = inst_.tour(leg.truck, leg.day)[leg.position - 1];
        model.add_row("seq_" + leg_name(g), {{cat.departure[g], 1.0}, {cat.departure[prev], -1.0}},
                      Relation::GreaterEqual, inst_.leg(prev).travel_blocks);
    }
}

void ProblemBuilder::add_capacity_constraints() {
    auto& model = out_.model;
    const auto& cat = out_.catalog;
    const int n_types = inst_.num_types();
    for (int i = 0; i < inst_.num_locations(); ++i) {
        for (int r = 0; r < n_types; ++r) {
            for (int t = 0; t < static_cast<int>(by_location_block_[i].size()); ++t) {
                std::vector<Term> terms;
                for (int e : by_location_block_[i][t])
                    if (cat.charge[e].type == r) terms.push_back({cat.charge[e].column, 1.0});
                if (terms.empty()) continue;
                std::string name = "cap_" + token(inst_.location(i).id) + "_r" + std::to_string(inst_.charger(r).id) +
                                   "_t" + std::to_string(t);
                if (codesign()) {
                    terms.push_back({cat.chargers[i][r], -1.0});
                    model.add_row(std::move(name), terms, Relation::LessEqual, 0.0);
                } else {
                    model.add_row(std::move(name), terms, Relation::LessEqual, inst_.fixed_count(i, r));
                }
            }
        }
    }
    for (int g = 0; g < inst_.num_legs(); ++g) {
        const auto [begin, end] = cat.charge_by_leg[g];
        for (int e = begin; e < end;) {
            const int t = cat.charge[e].block;
            std::vector<Term> terms;
            for (; e < end && cat.charge[e].block == t; ++e) terms.push_back({cat.charge[e].column, 1.0});
            model.add_row("one_" + leg_name(g) + "_t" + std::to_string(t), terms, Relation::LessEqual, 1.0);
        }
    }
}

void ProblemBuilder::add_peak_epigraph() {
    auto& model = out_.model;
    const auto& cat = out_.catalog;
    const double scale = inst_.scenario().prices.peak_price_per_kw * peak_factor(inst_);
    for (int i = 0; i < inst_.num_locations(); ++i) {
        for (int t = 0; t < static_cast<int>(by_location_block_[i].size()); ++t) {
            if (by_location_block_[i][t].empty()) continue;
            std::vector<Term> terms = {{cat.peak[i], 1.0}};
            for (int e : by_location_block_[i][t])
                terms.push_back({cat.charge[e].column, -scale * inst_.charger(cat.charge[e].type).rated_power_kw});
            model.add_row("peak_" + token(inst_.location(i).id) + "_t" + std::to_string(t), terms,
                          Relation::GreaterEqual, 0.0);
        }
    }
}

void ProblemBuilder::build_objective() {
    auto& model = out_.model;
    const auto& cat = out_.catalog;
    const double tau = inst_.grid().block_hours();
    for (const auto& c : cat.charge) {
        const ChargerType& type = inst_.charger(c.type);
        model.column(c.column).cost = tau * type.rated_power_kw / type.efficiency * inst_.energy_price(c.type, c.block);
    }
    const double w = infrastructure_weight(inst_);
    double offset = 0.0;
    for (int i = 0; i < inst_.num_locations(); ++i) {
        for (int r = 0; r < inst_.num_types(); ++r) {
            const double capital = w * inst_.charger(r).capital_cost;
            if (codesign()) {
                if (cat.chargers[i][r] >= 0) model.column(cat.chargers[i][r]).cost = capital;
            } else {
                offset += capital * inst_.fixed_count(i, r);
            }
        }
        if (cat.peak[i] >= 0) model.column(cat.peak[i]).cost = inst_.params().alpha;
    }
    model.set_objective_offset(offset);
}

BuiltModel ProblemBuilder::finish() && { return std::move(out_); }

BuiltModel build_problem(const Instance& inst) {
    ProblemBuilder b(inst);
    b.add_variables();
    b.add_energy_constraints();
    b.add_schedule_constraints();
    b.add_capacity_constraints();
    b.add_peak_epigraph();
    b.build_objective();
    return std::move(b).finish();
}

}  // namespace chargeplan
