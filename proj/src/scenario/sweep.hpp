#pragma once

#include <string>
#include <vector>

#include "scenario/pipeline.hpp"

namespace chargeplan {

struct SweepSpec {
    std::vector<double> alphas;
    std::vector<int> slack_minutes;
    std::vector<DesignMode> designs;
    ChargerCounts fixed_counts;  // used by FixedInfrastructure cells
    solver::SolverOptions solver;
    int threads = 1;
    std::string out_dir;  // nothing is written when empty
};

/// Throws std::invalid_argument for empty lists, negative slack, or slack that is
/// not a whole number of blocks.
void check_sweep(const SweepSpec& spec, const TimeGrid& grid);

struct SweepCell {
    std::string name;
    double alpha = 0.0;
    int slack_minutes = 0;
    DesignMode design = DesignMode::CoDesign;
    SolveResult result;
};

struct SweepSummary {
    std::vector<SweepCell> cells;  // alpha-major, then slack, then design
    int failures() const;
};

std::string cell_name(double alpha, int slack_minutes, DesignMode design);

/// One solve per (alpha, slack, design) cell on a worker pool. Cells that fail are
/// recorded and the sweep carries on. With an output directory, writes
/// cells/<name>.json, infrastructure.csv, costs.csv, power_curves.csv, summary.json.
SweepSummary run_sweep(const Scenario& scenario, const SweepSpec& spec);

void write_sweep_outputs(const SweepSummary& summary, const std::string& out_dir);

/// Average day of one location's curve, by type: [type][block of day].
std::vector<std::vector<double>> average_daily_power(const Instance& inst, const PlanReport& plan, int location);

}  // namespace chargeplan
