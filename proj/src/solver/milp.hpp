#pragma once

#include <ostream>
#include <stdexcept>
#include <vector>

#include "model/linear_model.hpp"

namespace chargeplan::solver {

enum class SolveStatus {
    Optimal,           // proven within the configured relative gap
    Feasible,          // incumbent found but a node or time limit stopped the search
    Infeasible,
    Unbounded,
    LimitReached,      // limits hit before any integer-feasible point was found
    NumericalFailure,
};

const char* to_string(SolveStatus status);

struct SolverOptions {
    double rel_gap = 1e-2;
    long node_limit = 1'000'000;
    double time_limit_s = 3600.0;
    double int_tol = 1e-6;
    double feas_tol = 1e-6;
    int warm_cache = 8;              // number of node tableaux kept for warm starts
    std::ostream* trace = nullptr;   // one line per node when set
    bool record_nodes = false;
};

struct NodeRecord {
    long id;
    int depth;
    double node_bound;
    double global_bound;
    double incumbent;  // +inf while none
};

struct Solution {
    SolveStatus status = SolveStatus::NumericalFailure;
    std::vector<double> values;
    double objective = kInf;
    double best_bound = -kInf;
    double gap = kInf;
    long nodes = 0;
    long lp_iterations = 0;
    double wall_seconds = 0.0;
    std::vector<NodeRecord> node_log;

    bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::Feasible; }
};

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (incumbent - bound) / max(|incumbent|, 1e-9)
double relative_gap(double incumbent, double bound);

/// Solve the continuous relaxation (integrality marks ignored).
Solution solve_lp(const LinearModel& model);

/// Best-bound branch-and-bound on the most fractional integer column.
Solution branch_and_bound(const LinearModel& model, const SolverOptions& options = {});

/// Exhaustive enumeration of every integer assignment, each completed by an LP
/// over the continuous columns. Reference oracle for small models.
Solution brute_force_enumerate(const LinearModel& model, int max_integers = 20);

}  // namespace chargeplan::solver
