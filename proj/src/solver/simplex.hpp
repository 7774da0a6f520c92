#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "model/linear_model.hpp"

namespace chargeplan::solver {

enum class LpStatus { Optimal, Infeasible, Unbounded, Cutoff, IterationLimit, NumericalFailure };

const char* to_string(LpStatus status);

struct SimplexOptions {
    double primal_tol = 1e-9;
    double dual_tol = 1e-9;
    double pivot_tol = 1e-9;
    int refactor_period = 100;
    // Consecutive degenerate pivots tolerated before switching to Bland's rule.
    int degenerate_limit = 50;
    long max_iterations = 0;  // 0 = derived from the model size
};

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, Zero };

/// Basis snapshot: the basic variable of every row plus the state of every
/// variable (structural columns first, then one logical per row).
struct Basis {
    std::vector<int> head;
    std::vector<VarState> state;

    bool operator==(const Basis&) const = default;
};

/// Bounded-variable simplex on a dense tableau.
///
/// Rows are turned into equalities A x - s = 0 with one logical variable s per
/// row whose bounds encode the relation. The tableau holds B^-1 [A | -I]
/// explicitly, so every pivot is a rank-one update. Rows and continuous columns
/// are scaled by powers of two; everything visible through the public interface
/// is unscaled. The object is copyable, which is how branch-and-bound keeps warm
/// tableaux around.
class DenseSimplex {
public:
    explicit DenseSimplex(const LinearModel& model, SimplexOptions options = {});

    int num_rows() const { return m_; }
    int num_structural() const { return n_; }

    /// Replace the structural column bounds (unscaled). Nonbasic columns move to
    /// their new bound; the basis itself is kept.
    void set_bounds(const std::vector<double>& lower, const std::vector<double>& upper);

    /// Cold start from the all-logical basis.
    LpStatus solve();
    /// Warm start from the current basis, typically after tightening bounds.
    /// Runs the dual simplex while the basis is dual feasible and stops early
    /// with Cutoff once the objective provably exceeds `cutoff`.
    LpStatus resolve(double cutoff = kInf);

    double objective() const;
    std::vector<double> values() const;
    long iterations() const { return iterations_; }

    Basis basis() const;
    /// Install a basis and refactorise. Returns false when the basis was
    /// singular and had to be repaired with logical columns.
    bool load_basis(const Basis& basis);

private:
    LpStatus primal();
    LpStatus dual(double cutoff);

    void reset_to_slack_basis();
    bool refactor();
    void pivot(int row, int col);
    void compute_primal();
    void compute_duals();
    void place_nonbasic(int j);
    bool make_dual_feasible();
    double scaled_objective() const;
    bool can_increase(int j) const;
    bool can_decrease(int j) const;

    double* row_ptr(int r) { return &tab_[static_cast<std::size_t>(r) * N_]; }
    const double* row_ptr(int r) const { return &tab_[static_cast<std::size_t>(r) * N_]; }

    SimplexOptions opt_;
    int m_ = 0, n_ = 0, N_ = 0;
    double offset_ = 0.0;
    std::shared_ptr<const std::vector<double>> a_;  // scaled structural matrix, m x n row-major; shared by copies
    std::vector<double> row_scale_;  // logical value = row_scale * activity
    std::vector<double> col_scale_;  // unscaled value = col_scale * scaled value
    std::vector<double> cost_, lo_, up_;
    std::vector<double> tab_;        // m x N
    std::vector<int> head_, pos_;
    std::vector<VarState> state_;
    std::vector<double> x_, d_;
    std::vector<int> nz_;            // scratch for pivot row nonzeros
    struct Candidate {
        double ratio;
        double abs_pivot;
        int column;
    };
    std::vector<Candidate> cand_;    // scratch for the dual ratio test
    std::vector<int> flips_;
    long iterations_ = 0;
    int since_refactor_ = 0;
    int singular_repairs_ = 0;
};

}  // namespace chargeplan::solver
