#include "scenario/sweep.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace chargeplan {

namespace fs = std::filesystem;

void check_sweep(const SweepSpec& spec, const TimeGrid& grid) {
    if (spec.alphas.empty() || spec.slack_minutes.empty() || spec.designs.empty())
        throw std::invalid_argument("sweep: alpha, slack and design lists must be nonempty");
    for (double a : spec.alphas)
        if (!(a >= 0.0)) throw std::invalid_argument("sweep: alpha must be nonnegative");
    for (int m : spec.slack_minutes) {
        if (m < 0) throw std::invalid_argument("sweep: slack must be nonnegative");
        if (grid.block_minutes <= 0 || m % grid.block_minutes != 0)
            throw std::invalid_argument("sweep: slack of " + std::to_string(m) + " min is not a whole number of " +
                                        std::to_string(grid.block_minutes) + "-min blocks");
    }
    if (spec.threads < 1) throw std::invalid_argument("sweep: threads must be at least 1");
}

int SweepSummary::failures() const {
    int n = 0;
    for (const auto& c : cells) n += c.result.has_plan() ? 0 : 1;
    return n;
}

std::string cell_name(double alpha, int slack_minutes, DesignMode design) {
    std::ostringstream s;
    s << "a" << alpha << "_s" << slack_minutes << "_" << (design == DesignMode::CoDesign ? "codesign" : "fixed");
    return s.str();
}

SweepSummary run_sweep(const Scenario& scenario, const SweepSpec& spec) {
    check_sweep(spec, scenario.time_grid);
    SweepSummary summary;
    for (double a : spec.alphas)
        for (int m : spec.slack_minutes)
            for (DesignMode d : spec.designs) summary.cells.push_back({cell_name(a, m, d), a, m, d, {}});

    PipelineOptions options;
    options.solver = spec.solver;
    options.solver.trace = nullptr;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < summary.cells.size(); c = next++) {
            auto& cell = summary.cells[c];
            Scenario s = scenario;
            s.params.alpha = cell.alpha;
            s.params.slack_minutes = cell.slack_minutes;
            s.params.design_mode = cell.design;
            if (cell.design == DesignMode::FixedInfrastructure) s.params.fixed_counts = spec.fixed_counts;
            try {
                cell.result = solve_scenario(s, options);
            } catch (const std::exception& e) {
                cell.result.outcome = Outcome::SolverFailure;
                cell.result.message = e.what();
            }
        }
    };
    const int n_threads = std::min<int>(spec.threads, static_cast<int>(summary.cells.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (!spec.out_dir.empty()) write_sweep_outputs(summary, spec.out_dir);
    return summary;
}

std::vector<std::vector<double>> average_daily_power(const Instance& inst, const PlanReport& plan, int location) {
    const auto curve = power_curve(inst, plan);
    const int per_day = inst.grid().blocks_per_day();
    const int days = inst.grid().num_days;
    std::vector<std::vector<double>> avg(inst.num_types(), std::vector<double>(per_day, 0.0));
    for (int r = 0; r < inst.num_types(); ++r)
        for (int t = 0; t < inst.grid().total_blocks(); ++t) avg[r][t % per_day] += curve[location][r][t] / days;
    return avg;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

const char* design_name(DesignMode d) { return d == DesignMode::CoDesign ? "codesign" : "fixed"; }

}  // namespace

void write_sweep_outputs(const SweepSummary& summary, const std::string& out_dir) {
    const fs::path root(out_dir);
    fs::create_directories(root / "cells");

    std::ostringstream infra, costs, curves;
    for (auto* s : {&infra, &costs, &curves}) *s << std::setprecision(12);
    infra << "cell,location,type,count\n";
    costs << "cell,alpha,slack_min,design,outcome,status,gap,energy,infrastructure,infrastructure_amortized,peak,total,"
             "total_amortized\n";
    bool curve_header = false;
    nlohmann::json cells = nlohmann::json::array();

    for (const auto& cell : summary.cells) {
        const auto& r = cell.result;
        auto report = result_to_json(r);
        write_file(root / "cells" / (cell.name + ".json"), report.dump(2) + "\n");
        cells.push_back({{"cell", cell.name},
                         {"alpha", cell.alpha},
                         {"slack_minutes", cell.slack_minutes},
                         {"design", design_name(cell.design)},
                         {"outcome", to_string(r.outcome)},
                         {"exit_code", exit_code(r)}});

        const std::string status = r.instance ? solver::to_string(r.solution.status) : "not_solved";
        costs << cell.name << ',' << cell.alpha << ',' << cell.slack_minutes << ',' << design_name(cell.design) << ','
              << to_string(r.outcome) << ',' << status << ',';
        if (!r.has_plan()) {
            costs << ",,,,,,\n";
            continue;
        }
        const Instance& inst = *r.instance;
        const auto& c = r.plan.costs;
        costs << r.solution.gap << ',' << c.energy << ',' << c.infrastructure << ',' << c.infrastructure_amortized
              << ',' << c.peak << ',' << c.total << ',' << c.total_amortized() << '\n';

        for (int i = 0; i < inst.num_locations(); ++i)
            for (int t = 0; t < inst.num_types(); ++t)
                infra << cell.name << ',' << inst.location(i).id << ',' << inst.charger(t).id << ','
                      << r.plan.charger_counts[i][t] << '\n';

        if (!curve_header) {
            curves << "cell,location,block";
            for (int t = 0; t < inst.num_types(); ++t) curves << ",kw_type_" << inst.charger(t).id;
            curves << ",kw_total";
            for (int t = 0; t < inst.num_types(); ++t) curves << ",smoothed_type_" << inst.charger(t).id;
            curves << ",smoothed_total,max_peak_kw,installed_kw\n";
            curve_header = true;
        }
        for (int i = 0; i < inst.num_locations(); ++i) {
            if (!inst.location(i).chargeable) continue;
            const auto avg = average_daily_power(inst, r.plan, i);
            std::vector<std::vector<double>> smooth;
            std::vector<double> total(inst.grid().blocks_per_day(), 0.0);
            for (const auto& series : avg) {
                smooth.push_back(smooth_daily(series));
                for (std::size_t b = 0; b < series.size(); ++b) total[b] += series[b];
            }
            const auto smooth_total = smooth_daily(total);
            double installed = 0.0;
            for (int t = 0; t < inst.num_types(); ++t)
                installed += r.plan.charger_counts[i][t] * inst.charger(t).rated_power_kw;
            for (int b = 0; b < inst.grid().blocks_per_day(); ++b) {
                curves << cell.name << ',' << inst.location(i).id << ',' << b;
                for (const auto& series : avg) curves << ',' << series[b];
                curves << ',' << total[b];
                for (const auto& series : smooth) curves << ',' << series[b];
                curves << ',' << smooth_total[b] << ',' << c.peak_kw[i] << ',' << installed << '\n';
            }
        }
    }
    if (!curve_header) curves << "cell,location,block\n";

    write_file(root / "infrastructure.csv", infra.str());
    write_file(root / "costs.csv", costs.str());
    write_file(root / "power_curves.csv", curves.str());
    write_file(root / "summary.json", nlohmann::json{{"cells", cells}, {"failures", summary.failures()}}.dump(2) + "\n");
}

}  // namespace chargeplan
