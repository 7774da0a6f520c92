#include "solver/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace chargeplan::solver {

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Cutoff: return "cutoff";
        case LpStatus::IterationLimit: return "iteration_limit";
        case LpStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

namespace {

double pow2_near(double v) {
    if (!(v > 0) || !std::isfinite(v)) return 1.0;
    return std::exp2(std::round(std::log2(v)));
}

constexpr double kDrop = 1e-13;
constexpr double kTie = 1e-12;

}  // namespace

DenseSimplex::DenseSimplex(const LinearModel& model, SimplexOptions options) : opt_(options) {
    m_ = model.num_rows();
    n_ = model.num_columns();
    N_ = n_ + m_;
    offset_ = model.objective_offset();
    if (opt_.max_iterations <= 0) opt_.max_iterations = 50L * (m_ + N_) + 10000;

    // Geometric row scaling followed by column scaling of continuous columns.
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
    for (int i = 0; i < m_; ++i) {
        double lo = kInf, hi = 0.0;
        for (const auto& t : model.row(i).terms) {
            lo = std::min(lo, std::abs(t.coef));
            hi = std::max(hi, std::abs(t.coef));
        }
        if (hi > 0) row_scale_[i] = pow2_near(1.0 / std::sqrt(lo * hi));
    }
    std::vector<double> cmin(n_, kInf), cmax(n_, 0.0);
    for (int i = 0; i < m_; ++i)
        for (const auto& t : model.row(i).terms) {
            const double v = std::abs(t.coef) * row_scale_[i];
            cmin[t.column] = std::min(cmin[t.column], v);
            cmax[t.column] = std::max(cmax[t.column], v);
        }
    for (int j = 0; j < n_; ++j)
        if (!model.column(j).integer && cmax[j] > 0) col_scale_[j] = pow2_near(1.0 / std::sqrt(cmin[j] * cmax[j]));

    auto a = std::make_shared<std::vector<double>>(static_cast<std::size_t>(m_) * n_, 0.0);
    for (int i = 0; i < m_; ++i)
        for (const auto& t : model.row(i).terms)
            (*a)[static_cast<std::size_t>(i) * n_ + t.column] = t.coef * row_scale_[i] * col_scale_[t.column];
    a_ = std::move(a);

    cost_.assign(N_, 0.0);
    lo_.assign(N_, 0.0);
    up_.assign(N_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const auto& c = model.column(j);
        cost_[j] = c.cost * col_scale_[j];
        lo_[j] = c.lower / col_scale_[j];
        up_[j] = c.upper / col_scale_[j];
    }
    for (int i = 0; i < m_; ++i) {
        const auto& r = model.row(i);
        const double rhs = r.rhs * row_scale_[i];
        lo_[n_ + i] = r.relation == Relation::LessEqual ? -kInf : rhs;
        up_[n_ + i] = r.relation == Relation::GreaterEqual ? kInf : rhs;
    }

    tab_.assign(static_cast<std::size_t>(m_) * N_, 0.0);
    head_.assign(m_, 0);
    pos_.assign(N_, -1);
    state_.assign(N_, VarState::AtLower);
    x_.assign(N_, 0.0);
    d_.assign(N_, 0.0);
    nz_.reserve(N_);
    reset_to_slack_basis();
}

void DenseSimplex::place_nonbasic(int j) {
    const bool lo_ok = std::isfinite(lo_[j]), up_ok = std::isfinite(up_[j]);
    VarState s = state_[j];
    if (s == VarState::AtLower && !lo_ok) s = up_ok ? VarState::AtUpper : VarState::Zero;
    if (s == VarState::AtUpper && !up_ok) s = lo_ok ? VarState::AtLower : VarState::Zero;
    if (s == VarState::Zero && (lo_ok || up_ok)) s = lo_ok ? VarState::AtLower : VarState::AtUpper;
    state_[j] = s;
    x_[j] = s == VarState::AtLower ? lo_[j] : s == VarState::AtUpper ? up_[j] : 0.0;
}

void DenseSimplex::reset_to_slack_basis() {
    std::fill(tab_.begin(), tab_.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
        double* row = row_ptr(i);
        const double* a = &(*a_)[static_cast<std::size_t>(i) * n_];
        for (int j = 0; j < n_; ++j) row[j] = -a[j];
        row[n_ + i] = 1.0;
        head_[i] = n_ + i;
    }
    std::fill(pos_.begin(), pos_.end(), -1);
    for (int i = 0; i < m_; ++i) {
        pos_[n_ + i] = i;
        state_[n_ + i] = VarState::Basic;
    }
    for (int j = 0; j < n_; ++j) {
        // Start on the bound favoured by the cost so the basis tends to be dual feasible.
        state_[j] = cost_[j] < 0 && std::isfinite(up_[j]) ? VarState::AtUpper : VarState::AtLower;
        place_nonbasic(j);
    }
    since_refactor_ = 0;
    compute_primal();
    compute_duals();
}

void DenseSimplex::set_bounds(const std::vector<double>& lower, const std::vector<double>& upper) {
    for (int j = 0; j < n_; ++j) {
        lo_[j] = lower[j] / col_scale_[j];
        up_[j] = upper[j] / col_scale_[j];
        if (state_[j] != VarState::Basic) place_nonbasic(j);
    }
}

void DenseSimplex::compute_primal() {
    std::vector<int> active;
    for (int j = 0; j < N_; ++j)
        if (state_[j] != VarState::Basic && x_[j] != 0.0) active.push_back(j);
    for (int r = 0; r < m_; ++r) {
        const double* row = row_ptr(r);
        double v = 0.0;
        for (int j : active) v -= row[j] * x_[j];
        x_[head_[r]] = v;
    }
}

void DenseSimplex::compute_duals() {
    for (int j = 0; j < N_; ++j) d_[j] = cost_[j];
    for (int r = 0; r < m_; ++r) {
        const double cb = cost_[head_[r]];
        if (cb == 0.0) continue;
        const double* row = row_ptr(r);
        for (int j = 0; j < N_; ++j) d_[j] -= cb * row[j];
    }
    for (int r = 0; r < m_; ++r) d_[head_[r]] = 0.0;
}

bool DenseSimplex::refactor() {
    // Rebuild B^-1 [A | -I] by Gauss-Jordan elimination on the basic columns.
    std::fill(tab_.begin(), tab_.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
        double* row = row_ptr(i);
        std::copy_n(&(*a_)[static_cast<std::size_t>(i) * n_], n_, row);
        row[n_ + i] = -1.0;
    }
    std::vector<int> basics(head_.begin(), head_.end());
    std::sort(basics.begin(), basics.end());
    std::vector<char> assigned(m_, 0);
    std::vector<int> new_head(m_, -1);
    bool clean = true;

    auto eliminate = [&](int r, int q) {
        double* pr = row_ptr(r);
        const double inv = 1.0 / pr[q];
        nz_.clear();
        for (int k = 0; k < N_; ++k) {
            if (pr[k] != 0.0) {
                pr[k] *= inv;
                nz_.push_back(k);
            }
        }
        pr[q] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* ri = row_ptr(i);
            const double f = ri[q];
            if (f == 0.0) continue;
            for (int k : nz_) {
                double v = ri[k] - f * pr[k];
                ri[k] = std::abs(v) < kDrop ? 0.0 : v;
            }
            ri[q] = 0.0;
        }
        assigned[r] = 1;
        new_head[r] = q;
    };

    // Logical columns first: each is a unit column in its own row.
    for (int q : basics) {
        if (q < n_) continue;
        const int r = q - n_;
        eliminate(r, q);
    }
    std::vector<int> dropped;
    for (int q : basics) {
        if (q >= n_) continue;
        int best = -1;
        double best_abs = 1e-11;
        for (int r = 0; r < m_; ++r) {
            if (assigned[r]) continue;
            const double v = std::abs(row_ptr(r)[q]);
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        if (best < 0) {
            dropped.push_back(q);
            continue;
        }
        eliminate(best, q);
    }
    for (int r = 0; r < m_; ++r) {
        if (assigned[r]) continue;
        // Singular basis: patch the row with its own logical.
        clean = false;
        eliminate(r, n_ + r);
        if (state_[n_ + r] != VarState::Basic) state_[n_ + r] = VarState::Basic;
    }
    for (int q : dropped) {
        state_[q] = VarState::AtLower;
        place_nonbasic(q);
    }
    head_ = new_head;
    std::fill(pos_.begin(), pos_.end(), -1);
    for (int r = 0; r < m_; ++r) {
        pos_[head_[r]] = r;
        state_[head_[r]] = VarState::Basic;
    }
    for (int j = 0; j < N_; ++j)
        if (pos_[j] < 0 && state_[j] == VarState::Basic) {
            state_[j] = VarState::AtLower;
            place_nonbasic(j);
        }
    since_refactor_ = 0;
    compute_primal();
    compute_duals();
    if (!clean) ++singular_repairs_;
    return clean;
}

void DenseSimplex::pivot(int r, int q) {
    double* pr = row_ptr(r);
    const double inv = 1.0 / pr[q];
    nz_.clear();
    for (int k = 0; k < N_; ++k) {
        if (pr[k] != 0.0) {
            pr[k] *= inv;
            nz_.push_back(k);
        }
    }
    pr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        double* ri = row_ptr(i);
        const double f = ri[q];
        if (f == 0.0) continue;
        for (int k : nz_) {
            double v = ri[k] - f * pr[k];
            ri[k] = std::abs(v) < kDrop ? 0.0 : v;
        }
        ri[q] = 0.0;
    }
    const double fd = d_[q];
    if (fd != 0.0)
        for (int k : nz_) d_[k] -= fd * pr[k];
    d_[q] = 0.0;

    const int leaving = head_[r];
    pos_[leaving] = -1;
    head_[r] = q;
    pos_[q] = r;
    state_[q] = VarState::Basic;
    ++since_refactor_;
    ++iterations_;
}

bool DenseSimplex::can_increase(int j) const {
    return (state_[j] == VarState::AtLower && up_[j] > lo_[j]) || state_[j] == VarState::Zero;
}

bool DenseSimplex::can_decrease(int j) const {
    return (state_[j] == VarState::AtUpper && up_[j] > lo_[j]) || state_[j] == VarState::Zero;
}

double DenseSimplex::scaled_objective() const {
    double v = 0.0;
    for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
    return v;
}

double DenseSimplex::objective() const { return scaled_objective() + offset_; }

std::vector<double> DenseSimplex::values() const {
    std::vector<double> out(n_);
    for (int j = 0; j < n_; ++j) out[j] = x_[j] * col_scale_[j];
    return out;
}

Basis DenseSimplex::basis() const { return {head_, state_}; }

bool DenseSimplex::load_basis(const Basis& b) {
    head_ = b.head;
    state_ = b.state;
    for (int j = 0; j < N_; ++j)
        if (state_[j] != VarState::Basic) place_nonbasic(j);
    return refactor();
}

LpStatus DenseSimplex::solve() {
    reset_to_slack_basis();
    singular_repairs_ = 0;
    if (make_dual_feasible()) return dual(kInf);
    return primal();
}

LpStatus DenseSimplex::resolve(double cutoff) {
    singular_repairs_ = 0;
    if (make_dual_feasible()) return dual(cutoff);
    return primal();
}

bool DenseSimplex::make_dual_feasible() {
    for (int j = 0; j < N_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        const double dj = d_[j];
        const bool fixed = lo_[j] == up_[j];
        if (fixed) continue;
        if (state_[j] == VarState::AtLower && dj < -opt_.dual_tol) {
            if (!std::isfinite(up_[j])) return false;
            state_[j] = VarState::AtUpper;
            x_[j] = up_[j];
        } else if (state_[j] == VarState::AtUpper && dj > opt_.dual_tol) {
            if (!std::isfinite(lo_[j])) return false;
            state_[j] = VarState::AtLower;
            x_[j] = lo_[j];
        } else if (state_[j] == VarState::Zero && std::abs(dj) > opt_.dual_tol) {
            return false;
        }
    }
    return true;
}

LpStatus DenseSimplex::primal() {
    compute_primal();
    std::vector<double> d1(N_, 0.0);
    std::vector<double> weight(m_, 0.0);
    bool bland = false;
    int degenerate = 0;
    bool rechecked = false;
    const long limit = iterations_ + opt_.max_iterations;

    while (true) {
        if (iterations_ > limit) return LpStatus::IterationLimit;
        if (since_refactor_ >= opt_.refactor_period) {
            refactor();
            if (singular_repairs_ > 3) return LpStatus::NumericalFailure;
        }

        bool phase1 = false;
        for (int r = 0; r < m_; ++r) {
            const int b = head_[r];
            weight[r] = x_[b] < lo_[b] - opt_.primal_tol ? 1.0 : x_[b] > up_[b] + opt_.primal_tol ? -1.0 : 0.0;
            if (weight[r] != 0.0) phase1 = true;
        }
        const double* dd = d_.data();
        if (phase1) {
            std::fill(d1.begin(), d1.end(), 0.0);
            for (int r = 0; r < m_; ++r) {
                if (weight[r] == 0.0) continue;
                const double* row = row_ptr(r);
                for (int j = 0; j < N_; ++j) d1[j] += weight[r] * row[j];
            }
            dd = d1.data();
        }

        int q = -1;
        double best = 0.0;
        for (int j = 0; j < N_; ++j) {
            if (state_[j] == VarState::Basic) continue;
            const double dj = dd[j];
            const bool ok = (dj < -opt_.dual_tol && can_increase(j)) || (dj > opt_.dual_tol && can_decrease(j));
            if (!ok) continue;
            if (bland) {
                q = j;
                break;
            }
            if (std::abs(dj) > best) {
                best = std::abs(dj);
                q = j;
            }
        }
        if (q < 0) {
            if (!rechecked && since_refactor_ > 0) {
                rechecked = true;
                refactor();
                continue;
            }
            return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
        }
        rechecked = false;
        const double dir = dd[q] < 0 ? 1.0 : -1.0;

        double theta = kInf;
        int leave = -1;
        bool leave_upper = false;
        double leave_pivot = 0.0;
        for (int r = 0; r < m_; ++r) {
            const double a = row_ptr(r)[q];
            if (std::abs(a) < opt_.pivot_tol) continue;
            const double rate = -a * dir;
            const int b = head_[r];
            const double xb = x_[b];
            double lim;
            bool to_upper;
            if (phase1 && xb < lo_[b] - opt_.primal_tol) {
                if (rate <= 0) continue;
                lim = (lo_[b] - xb) / rate;
                to_upper = false;
            } else if (phase1 && xb > up_[b] + opt_.primal_tol) {
                if (rate >= 0) continue;
                lim = (xb - up_[b]) / -rate;
                to_upper = true;
            } else if (rate < 0) {
                if (!std::isfinite(lo_[b])) continue;
                lim = std::max(0.0, (xb - lo_[b]) / -rate);
                to_upper = false;
            } else {
                if (!std::isfinite(up_[b])) continue;
                lim = std::max(0.0, (up_[b] - xb) / rate);
                to_upper = true;
            }
            bool take = lim < theta - kTie;
            if (!take && std::abs(lim - theta) <= kTie && leave >= 0)
                take = bland ? b < head_[leave] : std::abs(a) > std::abs(leave_pivot);
            if (take) {
                theta = lim;
                leave = r;
                leave_upper = to_upper;
                leave_pivot = a;
            }
        }
        const double range = up_[q] - lo_[q];
        const bool flip = std::isfinite(range) && state_[q] != VarState::Zero && range <= theta;
        if (leave < 0 && !flip) return phase1 ? LpStatus::NumericalFailure : LpStatus::Unbounded;

        const double step = flip ? range : theta;
        if (step != 0.0) {
            for (int r = 0; r < m_; ++r) {
                const double a = row_ptr(r)[q];
                if (a != 0.0) x_[head_[r]] -= a * dir * step;
            }
        }
        if (flip) {
            state_[q] = state_[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
            x_[q] = state_[q] == VarState::AtLower ? lo_[q] : up_[q];
            ++iterations_;
        } else {
            x_[q] += dir * step;
            const int b = head_[leave];
            pivot(leave, q);
            state_[b] = leave_upper ? VarState::AtUpper : VarState::AtLower;
            x_[b] = leave_upper ? up_[b] : lo_[b];
        }
        if (step <= kTie) {
            if (++degenerate > opt_.degenerate_limit) bland = true;
        } else {
            degenerate = 0;
            bland = false;
        }
    }
}

LpStatus DenseSimplex::dual(double cutoff) {
    compute_primal();
    bool bland = false;
    int degenerate = 0;
    bool rechecked = false;
    const long limit = iterations_ + opt_.max_iterations;
    const double cutoff_scaled = cutoff - offset_;

    while (true) {
        if (iterations_ > limit) return LpStatus::IterationLimit;
        if (since_refactor_ >= opt_.refactor_period) {
            refactor();
            if (singular_repairs_ > 3) return LpStatus::NumericalFailure;
            if (!make_dual_feasible()) return primal();
        }
        if (std::isfinite(cutoff)) {
            const double obj = scaled_objective();
            if (obj > cutoff_scaled + 1e-9 * std::max(1.0, std::abs(cutoff_scaled))) return LpStatus::Cutoff;
        }

        int r = -1;
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int b = head_[i];
            double infeas = 0.0;
            if (x_[b] < lo_[b] - opt_.primal_tol) infeas = lo_[b] - x_[b];
            else if (x_[b] > up_[b] + opt_.primal_tol) infeas = x_[b] - up_[b];
            if (infeas == 0.0) continue;
            if (bland) {
                if (r < 0 || b < head_[r]) r = i;
            } else if (infeas > worst) {
                worst = infeas;
                r = i;
            }
        }
        if (r < 0) {
            if (!rechecked && since_refactor_ > 0) {
                // Confirm optimality on freshly computed values; a full refactorisation
                // only pays off once enough updates have accumulated.
                rechecked = true;
                if (since_refactor_ >= opt_.refactor_period / 4) {
                    refactor();
                } else {
                    compute_primal();
                    compute_duals();
                }
                if (!make_dual_feasible()) return primal();
                continue;
            }
            for (int j = 0; j < N_; ++j) {
                if (state_[j] == VarState::Basic || lo_[j] == up_[j]) continue;
                const double dj = d_[j];
                if ((state_[j] == VarState::AtLower && dj < -opt_.dual_tol * 10) ||
                    (state_[j] == VarState::AtUpper && dj > opt_.dual_tol * 10) ||
                    (state_[j] == VarState::Zero && std::abs(dj) > opt_.dual_tol * 10))
                    return primal();
            }
            return LpStatus::Optimal;
        }
        rechecked = false;

        const int b = head_[r];
        const bool below = x_[b] < lo_[b];
        const double target = below ? lo_[b] : up_[b];
        const double s = below ? 1.0 : -1.0;
        const double* pr = row_ptr(r);

        // Long-step ratio test: boxed columns whose breakpoint comes first are
        // flipped to their other bound as long as the row stays infeasible.
        cand_.clear();
        for (int j = 0; j < N_; ++j) {
            if (state_[j] == VarState::Basic || lo_[j] == up_[j]) continue;
            const double a = pr[j];
            if (std::abs(a) < opt_.pivot_tol) continue;
            bool ok = false;
            if (state_[j] == VarState::AtLower) ok = a * s < 0;
            else if (state_[j] == VarState::AtUpper) ok = a * s > 0;
            else ok = true;
            if (ok) cand_.push_back({std::abs(d_[j]) / std::abs(a), std::abs(a), j});
        }
        std::sort(cand_.begin(), cand_.end(), [&](const Candidate& u, const Candidate& v) {
            if (std::abs(u.ratio - v.ratio) > kTie) return u.ratio < v.ratio;
            if (!bland && u.abs_pivot != v.abs_pivot) return u.abs_pivot > v.abs_pivot;
            return u.column < v.column;
        });
        int q = -1;
        double best_ratio = kInf;
        double slope = std::abs(x_[b] - target);
        flips_.clear();
        for (const auto& c : cand_) {
            const double range = up_[c.column] - lo_[c.column];
            if (!bland && std::isfinite(range) && state_[c.column] != VarState::Zero &&
                slope - c.abs_pivot * range > opt_.primal_tol) {
                slope -= c.abs_pivot * range;
                flips_.push_back(c.column);
                continue;
            }
            q = c.column;
            best_ratio = c.ratio;
            break;
        }
        if (q < 0) {
            if (!rechecked && since_refactor_ >= opt_.refactor_period / 4) {
                rechecked = true;
                refactor();
                if (!make_dual_feasible()) return primal();
                continue;
            }
            return LpStatus::Infeasible;
        }
        for (int j : flips_) {
            const double step = state_[j] == VarState::AtLower ? up_[j] - lo_[j] : lo_[j] - up_[j];
            state_[j] = state_[j] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
            x_[j] = state_[j] == VarState::AtLower ? lo_[j] : up_[j];
            for (int i = 0; i < m_; ++i) {
                const double a = row_ptr(i)[j];
                if (a != 0.0) x_[head_[i]] -= a * step;
            }
            ++iterations_;
        }

        const double delta = (x_[b] - target) / pr[q];
        for (int i = 0; i < m_; ++i) {
            const double a = row_ptr(i)[q];
            if (a != 0.0) x_[head_[i]] -= a * delta;
        }
        x_[q] += delta;
        pivot(r, q);
        state_[b] = below ? VarState::AtLower : VarState::AtUpper;
        x_[b] = target;

        if (best_ratio <= kTie) {
            if (++degenerate > opt_.degenerate_limit) bland = true;
        } else {
            degenerate = 0;
            bland = false;
        }
    }
}

}  // namespace chargeplan::solver
