#include "solver/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <list>
#include <memory>
#include <optional>
#include <queue>

#include "solver/simplex.hpp"

namespace chargeplan::solver {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::LimitReached: return "limit_reached";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

double relative_gap(double incumbent, double bound) {
    if (!std::isfinite(incumbent)) return kInf;
    return std::max(0.0, incumbent - bound) / std::max(std::abs(incumbent), 1e-9);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Gaps below this are treated as closed, whatever the requested target.
constexpr double kGapFloor = 1e-9;

struct BoundChange {
    int column;
    double lower;
    double upper;
};

struct Node {
    long id = 0;
    int depth = 0;
    double bound = -kInf;
    long seq = 0;
    long parent = -1;
    std::shared_ptr<const Basis> warm;
    std::shared_ptr<const std::vector<BoundChange>> changes;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        // priority_queue pops the "largest": invert for min-bound first.
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.seq > b.seq;
    }
};

// Tableaux of recently solved nodes, keyed by node id. Each one serves its two
// children: the first gets a copy, the second takes the original.
class WarmCache {
public:
    explicit WarmCache(int capacity) : capacity_(std::max(0, capacity)) {}

    std::optional<DenseSimplex> take(long key) {
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->key != key) continue;
            if (++it->uses >= 2) {
                std::optional<DenseSimplex> out(std::move(it->engine));
                entries_.erase(it);
                return out;
            }
            entries_.splice(entries_.begin(), entries_, it);
            return entries_.front().engine;
        }
        return std::nullopt;
    }

    void put(long key, DenseSimplex&& engine) {
        if (capacity_ == 0) return;
        entries_.push_front({key, 0, std::move(engine)});
        if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_back();
    }

private:
    struct Entry {
        long key;
        int uses;
        DenseSimplex engine;
    };
    int capacity_;
    std::list<Entry> entries_;
};

Solution from_lp(const DenseSimplex& engine, LpStatus st) {
    Solution s;
    switch (st) {
        case LpStatus::Optimal:
            s.status = SolveStatus::Optimal;
            s.values = engine.values();
            s.objective = engine.objective();
            s.best_bound = s.objective;
            s.gap = 0.0;
            break;
        case LpStatus::Infeasible: s.status = SolveStatus::Infeasible; break;
        case LpStatus::Unbounded: s.status = SolveStatus::Unbounded; s.objective = -kInf; break;
        default: s.status = SolveStatus::NumericalFailure; break;
    }
    s.lp_iterations = engine.iterations();
    return s;
}

}  // namespace

Solution solve_lp(const LinearModel& model) {
    const auto start = Clock::now();
    DenseSimplex engine(model);
    Solution s = from_lp(engine, engine.solve());
    s.nodes = 1;
    s.wall_seconds = seconds_since(start);
    return s;
}

Solution branch_and_bound(const LinearModel& model, const SolverOptions& opt) {
    const auto start = Clock::now();
    const int n = model.num_columns();
    std::vector<double> root_lo(n), root_up(n);
    std::vector<int> integer_cols;
    for (int j = 0; j < n; ++j) {
        const auto& c = model.column(j);
        root_lo[j] = c.integer ? std::ceil(c.lower - opt.int_tol) : c.lower;
        root_up[j] = c.integer ? std::floor(c.upper + opt.int_tol) : c.upper;
        if (c.integer) integer_cols.push_back(j);
    }

    Solution best;
    best.status = SolveStatus::Infeasible;
    double incumbent = kInf;
    std::vector<double> incumbent_x;
    double pruned_bound = kInf;  // lowest bound among nodes discarded by the gap test
    bool lost_nodes = false;      // numerical failures leave parts of the tree unexplored
    long lp_iterations = 0;

    auto prune_level = [&]() {
        if (!std::isfinite(incumbent)) return kInf;
        const double scale = std::max(std::abs(incumbent), 1e-9);
        return incumbent - std::max(opt.rel_gap, kGapFloor) * scale;
    };

    const DenseSimplex pristine(model);
    WarmCache cache(opt.warm_cache);
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0, next_seq = 0;

    Node root;
    root.id = next_id++;
    root.seq = next_seq++;
    root.changes = std::make_shared<const std::vector<BoundChange>>();
    open.push(root);

    auto accept_candidate = [&](std::vector<double> x) {
        for (int j : integer_cols) x[j] = std::round(x[j]);
        if (!check_assignment(model, x, opt.feas_tol, opt.int_tol).empty()) {
            // Snapping moved the point off the rows: re-solve the continuous part with integers fixed.
            std::vector<double> lo = root_lo, up = root_up;
            for (int j : integer_cols) lo[j] = up[j] = x[j];
            DenseSimplex polish = pristine;
            polish.set_bounds(lo, up);
            if (polish.solve() != LpStatus::Optimal) return;
            lp_iterations += polish.iterations();
            x = polish.values();
            for (int j : integer_cols) x[j] = lo[j];
            if (!check_assignment(model, x, opt.feas_tol, opt.int_tol).empty()) return;
        }
        const double obj = model.objective_value(x);
        if (obj < incumbent) {
            incumbent = obj;
            incumbent_x = std::move(x);
        }
    };

    long processed = 0;
    bool limit_hit = false;
    bool unbounded = false;
    double stop_bound = kInf;

    // Until the first incumbent exists the search is depth first, visiting the child
    // that rounds the branching column to its nearest integer first; afterwards it
    // is pure best-bound.
    std::vector<Node> dive;
    auto flush_dive = [&] {
        for (auto& d : dive) open.push(std::move(d));
        dive.clear();
    };
    while (!open.empty() || !dive.empty()) {
        if (processed >= opt.node_limit || seconds_since(start) >= opt.time_limit_s) {
            flush_dive();
            limit_hit = true;
            break;
        }
        if (std::isfinite(incumbent)) flush_dive();
        Node node;
        const bool diving = !dive.empty();
        if (diving) {
            node = std::move(dive.back());
            dive.pop_back();
        } else {
            node = open.top();
            open.pop();
        }
        if (node.bound >= prune_level()) {
            if (diving || (!open.empty() && open.top().bound < node.bound)) {
                pruned_bound = std::min(pruned_bound, node.bound);
                continue;
            }
            // Best-first: every remaining node is at least as bad.
            stop_bound = node.bound;
            break;
        }
        ++processed;

        std::vector<double> lo = root_lo, up = root_up;
        for (const auto& ch : *node.changes) {
            lo[ch.column] = ch.lower;
            up[ch.column] = ch.upper;
        }

        const double cutoff = prune_level();
        std::optional<DenseSimplex> cached = node.warm ? cache.take(node.parent) : std::nullopt;
        const bool hit = cached.has_value();
        if (!hit) cached.emplace(pristine);
        DenseSimplex& work = *cached;
        long base_iterations = work.iterations();
        LpStatus st;
        if (hit) {
            work.set_bounds(lo, up);
            st = work.resolve(cutoff);
        } else if (node.warm) {
            work.load_basis(*node.warm);
            work.set_bounds(lo, up);
            st = work.resolve(cutoff);
        } else {
            work.set_bounds(lo, up);
            st = work.solve();
        }
        if (st == LpStatus::NumericalFailure || st == LpStatus::IterationLimit) {
            lp_iterations += work.iterations() - base_iterations;
            cached.emplace(pristine);
            base_iterations = work.iterations();
            work.set_bounds(lo, up);
            st = work.solve();
        }
        lp_iterations += work.iterations() - base_iterations;

        double node_obj = node.bound;
        if (st == LpStatus::Optimal) node_obj = std::max(node.bound, work.objective());

        if (opt.record_nodes || opt.trace) {
            // Lowest bound over everything not yet fathomed, this node included.
            double global = std::min(node.bound, pruned_bound);
            if (!open.empty()) global = std::min(global, open.top().bound);
            for (const auto& d : dive) global = std::min(global, d.bound);
            NodeRecord rec{node.id, node.depth, node_obj, global, incumbent};
            if (opt.record_nodes) best.node_log.push_back(rec);
            if (opt.trace)
                *opt.trace << "node " << rec.id << " depth " << rec.depth << " bound " << rec.node_bound
                           << " incumbent " << rec.incumbent << ' ' << to_string(st) << " pivots "
                           << work.iterations() - base_iterations << '\n';
        }

        if (st == LpStatus::Infeasible) continue;
        if (st == LpStatus::Cutoff) {
            pruned_bound = std::min(pruned_bound, cutoff);
            continue;
        }
        if (st == LpStatus::Unbounded) {
            unbounded = true;
            break;
        }
        if (st != LpStatus::Optimal) {
            lost_nodes = true;
            pruned_bound = std::min(pruned_bound, node.bound);
            continue;
        }
        if (node_obj >= prune_level()) {
            pruned_bound = std::min(pruned_bound, node_obj);
            continue;
        }

        const std::vector<double> x = work.values();
        int branch_col = -1;
        double best_frac = opt.int_tol;
        for (int j : integer_cols) {
            const double f = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
            if (f > best_frac) {
                best_frac = f;
                branch_col = j;
            }
        }
        if (branch_col < 0) {
            accept_candidate(x);
            continue;
        }

        auto basis = std::make_shared<const Basis>(work.basis());
        cache.put(node.id, std::move(work));
        const double v = x[branch_col];
        const int dive_dir = v - std::floor(v) >= 0.5 ? 1 : 0;
        for (int dir : {1 - dive_dir, dive_dir}) {
            auto changes = std::make_shared<std::vector<BoundChange>>(*node.changes);
            BoundChange ch{branch_col, lo[branch_col], up[branch_col]};
            if (dir == 0) ch.upper = std::floor(v);
            else ch.lower = std::ceil(v);
            changes->push_back(ch);
            Node child;
            child.id = next_id++;
            child.seq = next_seq++;
            child.depth = node.depth + 1;
            child.bound = node_obj;
            child.parent = node.id;
            child.warm = basis;
            child.changes = std::move(changes);
            if (std::isfinite(incumbent)) open.push(std::move(child));
            else dive.push_back(std::move(child));
        }
    }

    best.nodes = processed;
    best.lp_iterations = lp_iterations;
    best.wall_seconds = seconds_since(start);

    if (unbounded) {
        best.status = SolveStatus::Unbounded;
        best.objective = -kInf;
        return best;
    }
    double bound = std::min({pruned_bound, stop_bound, incumbent});
    if (limit_hit && !open.empty()) bound = std::min(bound, open.top().bound);
    if (!std::isfinite(incumbent)) {
        best.status = limit_hit ? SolveStatus::LimitReached
                                : (lost_nodes ? SolveStatus::NumericalFailure : SolveStatus::Infeasible);
        best.best_bound = std::isfinite(bound) ? bound : -kInf;
        return best;
    }
    best.values = std::move(incumbent_x);
    best.objective = incumbent;
    best.best_bound = bound;
    best.gap = relative_gap(incumbent, bound);
    best.status = best.gap <= std::max(opt.rel_gap, kGapFloor) * (1 + 1e-6) ? SolveStatus::Optimal : SolveStatus::Feasible;
    return best;
}

Solution brute_force_enumerate(const LinearModel& model, int max_integers) {
    const auto start = Clock::now();
    const int n = model.num_columns();
    std::vector<int> ints;
    for (int j = 0; j < n; ++j)
        if (model.column(j).integer) ints.push_back(j);
    if (static_cast<int>(ints.size()) > max_integers)
        throw TooLarge("brute force: " + std::to_string(ints.size()) + " integer columns exceed the cap of " +
                       std::to_string(max_integers));

    std::vector<double> lo(n), up(n);
    std::vector<long> first(ints.size()), last(ints.size());
    double combos = 1.0;
    for (int j = 0; j < n; ++j) {
        lo[j] = model.column(j).lower;
        up[j] = model.column(j).upper;
    }
    for (std::size_t k = 0; k < ints.size(); ++k) {
        const auto& c = model.column(ints[k]);
        if (!std::isfinite(c.lower) || !std::isfinite(c.upper))
            throw TooLarge("brute force: integer column " + c.name + " has an infinite bound");
        first[k] = static_cast<long>(std::ceil(c.lower - 1e-9));
        last[k] = static_cast<long>(std::floor(c.upper + 1e-9));
        combos *= static_cast<double>(std::max(0L, last[k] - first[k] + 1));
    }
    if (combos > static_cast<double>(1L << 26)) throw TooLarge("brute force: too many integer assignments");

    Solution best;
    best.status = SolveStatus::Infeasible;
    best.nodes = 0;
    if (combos == 0) return best;

    DenseSimplex engine(model);
    std::vector<long> value(first);
    while (true) {
        for (std::size_t k = 0; k < ints.size(); ++k) lo[ints[k]] = up[ints[k]] = static_cast<double>(value[k]);
        engine.set_bounds(lo, up);
        const LpStatus st = engine.solve();
        ++best.nodes;
        if (st == LpStatus::Unbounded) {
            best.status = SolveStatus::Unbounded;
            best.objective = -kInf;
            best.values.clear();
            break;
        }
        if (st == LpStatus::Optimal) {
            const double obj = engine.objective();
            if (obj < best.objective) {
                best.objective = obj;
                best.values = engine.values();
                for (std::size_t k = 0; k < ints.size(); ++k) best.values[ints[k]] = static_cast<double>(value[k]);
                best.status = SolveStatus::Optimal;
            }
        } else if (st != LpStatus::Infeasible) {
            best.status = SolveStatus::NumericalFailure;
            break;
        }
        std::size_t k = 0;
        while (k < ints.size() && value[k] == last[k]) {
            value[k] = first[k];
            ++k;
        }
        if (k == ints.size()) break;
        ++value[k];
    }
    best.lp_iterations = engine.iterations();
    if (best.status == SolveStatus::Optimal) {
        best.best_bound = best.objective;
        best.gap = 0.0;
    }
    best.wall_seconds = seconds_since(start);
    return best;
}

}  // namespace chargeplan::solver
