#include "model/linear_model.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace chargeplan {

int LinearModel::add_column(std::string name, double lower, double upper, double cost, bool integer) {
    if (lower > upper) throw std::invalid_argument("column '" + name + "' has lower > upper");
    columns_.push_back({std::move(name), lower, upper, integer, cost});
    return num_columns() - 1;
}

int LinearModel::add_row(std::string name, std::vector<Term> terms, Relation relation, double rhs) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.column < b.column; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        if (t.column < 0 || t.column >= num_columns())
            throw std::out_of_range("row '" + name + "' references a missing column");
        if (!merged.empty() && merged.back().column == t.column) merged.back().coef += t.coef;
        else merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    rows_.push_back({std::move(name), std::move(merged), relation, rhs});
    return num_rows() - 1;
}

int LinearModel::num_integer() const {
    return static_cast<int>(std::count_if(columns_.begin(), columns_.end(), [](const Column& c) { return c.integer; }));
}

double LinearModel::objective_value(const std::vector<double>& x) const {
    double v = offset_;
    for (int j = 0; j < num_columns(); ++j) v += columns_[j].cost * x[j];
    return v;
}

double LinearModel::row_activity(int i, const std::vector<double>& x) const {
    double a = 0.0;
    for (const auto& t : rows_[i].terms) a += t.coef * x[t.column];
    return a;
}

std::vector<RowViolation> check_assignment(const LinearModel& model, const std::vector<double>& x,
                                           double feas_tol, double int_tol) {
    std::vector<RowViolation> out;
    if (static_cast<int>(x.size()) != model.num_columns()) {
        out.push_back({-1, -1, 0.0, "assignment size does not match the model"});
        return out;
    }
    for (int j = 0; j < model.num_columns(); ++j) {
        const auto& c = model.column(j);
        if (!std::isfinite(x[j])) out.push_back({-1, j, kInf, "non-finite value in " + c.name});
        else if (x[j] < c.lower - feas_tol) out.push_back({-1, j, c.lower - x[j], "below lower bound: " + c.name});
        else if (x[j] > c.upper + feas_tol) out.push_back({-1, j, x[j] - c.upper, "above upper bound: " + c.name});
        if (c.integer && std::abs(x[j] - std::round(x[j])) > int_tol)
            out.push_back({-1, j, std::abs(x[j] - std::round(x[j])), "fractional integer column: " + c.name});
    }
    for (int i = 0; i < model.num_rows(); ++i) {
        const auto& r = model.row(i);
        const double a = model.row_activity(i, x);
        double viol = 0.0;
        switch (r.relation) {
            case Relation::LessEqual: viol = a - r.rhs; break;
            case Relation::GreaterEqual: viol = r.rhs - a; break;
            case Relation::Equal: viol = std::abs(a - r.rhs); break;
        }
        if (viol > feas_tol) out.push_back({i, -1, viol, "row violated: " + r.name});
    }
    return out;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_terms(std::ostream& out, const std::vector<std::pair<double, const std::string*>>& terms) {
    int on_line = 0;
    bool first = true;
    for (const auto& [coef, name] : terms) {
        out << (coef < 0 ? " - " : (first ? " " : " + ")) << num(std::abs(coef)) << ' ' << *name;
        first = false;
        if (++on_line == 6) {
            out << "\n   ";
            on_line = 0;
        }
    }
    if (first) out << " 0";
}

}  // namespace

void write_lp_format(const LinearModel& model, std::ostream& out) {
    out << "\\ objective offset " << num(model.objective_offset()) << "\nMinimize\n obj:";
    std::vector<std::pair<double, const std::string*>> terms;
    for (const auto& c : model.columns())
        if (c.cost != 0.0) terms.emplace_back(c.cost, &c.name);
    write_terms(out, terms);
    out << "\nSubject To\n";
    for (const auto& r : model.rows()) {
        terms.clear();
        for (const auto& t : r.terms) terms.emplace_back(t.coef, &model.column(t.column).name);
        out << ' ' << r.name << ':';
        write_terms(out, terms);
        const char* rel = r.relation == Relation::LessEqual ? " <= " : r.relation == Relation::GreaterEqual ? " >= " : " = ";
        out << rel << num(r.rhs) << '\n';
    }
    out << "Bounds\n";
    for (const auto& c : model.columns()) {
        if (std::isinf(c.lower) && std::isinf(c.upper)) out << ' ' << c.name << " free\n";
        else if (c.lower == c.upper) out << ' ' << c.name << " = " << num(c.lower) << '\n';
        else {
            out << ' ' << (std::isinf(c.lower) ? "-inf" : num(c.lower)) << " <= " << c.name << " <= "
                << (std::isinf(c.upper) ? "+inf" : num(c.upper)) << '\n';
        }
    }
    bool any_general = false, any_binary = false;
    for (const auto& c : model.columns()) {
        if (!c.integer) continue;
        (c.lower == 0.0 && c.upper == 1.0 ? any_binary : any_general) = true;
    }
    if (any_general) {
        out << "General\n";
        for (const auto& c : model.columns())
            if (c.integer && !(c.lower == 0.0 && c.upper == 1.0)) out << ' ' << c.name << '\n';
    }
    if (any_binary) {
        out << "Binary\n";
        for (const auto& c : model.columns())
            if (c.integer && c.lower == 0.0 && c.upper == 1.0) out << ' ' << c.name << '\n';
    }
    out << "End\n";
}

}  // namespace chargeplan
