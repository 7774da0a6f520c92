#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace chargeplan {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Term {
    int column;
    double coef;

    bool operator==(const Term&) const = default;
};

struct Column {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    bool integer = false;
    double cost = 0.0;

    bool operator==(const Column&) const = default;
};

struct Row {
    std::string name;
    std::vector<Term> terms;  // sorted by column, no duplicates
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;

    bool operator==(const Row&) const = default;
};

/// Solver-agnostic mixed-integer linear program: minimise cost.x + offset.
class LinearModel {
public:
    int add_column(std::string name, double lower, double upper, double cost, bool integer = false);
    int add_binary(std::string name, double cost) { return add_column(std::move(name), 0.0, 1.0, cost, true); }
    /// Terms referring to the same column are merged; zero coefficients dropped.
    int add_row(std::string name, std::vector<Term> terms, Relation relation, double rhs);

    void set_objective_offset(double offset) { offset_ = offset; }
    double objective_offset() const { return offset_; }

    int num_columns() const { return static_cast<int>(columns_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int num_integer() const;

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<Row>& rows() const { return rows_; }
    const Column& column(int j) const { return columns_[j]; }
    Column& column(int j) { return columns_[j]; }
    const Row& row(int i) const { return rows_[i]; }

    double objective_value(const std::vector<double>& x) const;
    double row_activity(int i, const std::vector<double>& x) const;

    bool operator==(const LinearModel&) const = default;

private:
    std::vector<Column> columns_;
    std::vector<Row> rows_;
    double offset_ = 0.0;
};

struct RowViolation {
    int row;  // -1 for a column bound or integrality violation
    int column;
    double amount;
    std::string what;
};

/// Row-by-row and bound-by-bound check of an assignment, independent of any solver state.
std::vector<RowViolation> check_assignment(const LinearModel& model, const std::vector<double>& x,
                                           double feas_tol = 1e-6, double int_tol = 1e-6);

/// Write the model in CPLEX LP text format.
void write_lp_format(const LinearModel& model, std::ostream& out);

}  // namespace chargeplan
