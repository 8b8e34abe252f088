#include "iegs/mip.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <stdexcept>

namespace iegs {

namespace {

struct Node {
    long id;
    int depth;
    double bound;
    // bound fixings relative to root: (col, 0/1)
    std::shared_ptr<const Node> parent;
    int fix_col = -1;
    int fix_val = 0;
    std::shared_ptr<BasisState> basis;  // parent basis for warm start
};

struct NodeOrder {
    bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;  // min-heap on bound
        if (a->depth != b->depth) return a->depth < b->depth;  // dive deeper first
        return a->id > b->id;
    }
};

void collect_fixings(const Node* n, std::vector<std::pair<int, int>>& out) {
    out.clear();
    for (const Node* p = n; p; p = p->parent.get())
        if (p->fix_col >= 0) out.push_back({p->fix_col, p->fix_val});
}

// Shift a zero-cost fractional binary onto an integer value when every row it
// appears in keeps its sense. Ordering binaries of incremental PWL encodings
// snap this way, which keeps them out of the branching tree.
int snap_binaries(const MixedIntegerProgram& mip,
                  const std::vector<std::vector<int>>& rows_of_col,
                  const std::vector<std::vector<std::pair<int, double>>>& row_terms,
                  std::vector<double>& x, double int_tol) {
    const LinearProgram& lp = mip.lp;
    std::vector<double> activity(lp.n_rows(), 0.0);
    for (int r = 0; r < lp.n_rows(); ++r)
        for (const auto& [c, v] : row_terms[r]) activity[r] += v * x[c];

    int snapped = 0;
    for (int j : mip.binaries) {
        double f = x[j] - std::floor(x[j]);
        if (f <= int_tol || f >= 1.0 - int_tol) continue;
        if (lp.obj[j] != 0.0) continue;
        double lo = 0.0, hi = 1.0;  // admissible interval for x_j
        for (int r : rows_of_col[j]) {
            double coef = 0.0;
            for (const auto& [c, v] : row_terms[r])
                if (c == j) coef += v;
            if (coef == 0.0) continue;
            double rest = activity[r] - coef * x[j];
            double slack = lp.rhs[r] - rest;  // coef * xj  vs  slack
            switch (lp.sense[r]) {
                case RowSense::LE:
                    if (coef > 0) hi = std::min(hi, slack / coef);
                    else lo = std::max(lo, slack / coef);
                    break;
                case RowSense::GE:
                    if (coef > 0) lo = std::max(lo, slack / coef);
                    else hi = std::min(hi, slack / coef);
                    break;
                case RowSense::EQ:
                    lo = std::max(lo, slack / coef);
                    hi = std::min(hi, slack / coef);
                    break;
            }
        }
        double target = kInf;
        if (lo <= 1e-9 && 0.0 <= hi + 1e-9) target = 0.0;
        if (target == kInf && lo <= 1.0 + 1e-9 && 1.0 <= hi + 1e-9) target = 1.0;
        if (target == kInf) continue;
        double delta = target - x[j];
        for (int r : rows_of_col[j]) {
            double coef = 0.0;
            for (const auto& [c, v] : row_terms[r])
                if (c == j) coef += v;
            activity[r] += coef * delta;
        }
        x[j] = target;
        snapped++;
    }
    return snapped;
}

}  // namespace

MipResult solve_mip(const MixedIntegerProgram& mip, const MipOptions& opt,
                    const BasisState* warm_root) {
    const LinearProgram& root_lp = mip.lp;
    root_lp.validate();
    for (int j : mip.binaries) {
        if (j < 0 || j >= root_lp.n_cols)
            throw std::invalid_argument("mip: binary index out of range");
    }

    MipResult res;
    // row-wise view for snapping
    std::vector<std::vector<int>> rows_of_col(root_lp.n_cols);
    std::vector<std::vector<std::pair<int, double>>> row_terms(root_lp.n_rows());
    {
        std::vector<char> is_bin(root_lp.n_cols, 0);
        for (int j : mip.binaries) is_bin[j] = 1;
        for (const auto& e : root_lp.elems) {
            row_terms[e.row].push_back({e.col, e.val});
            if (is_bin[e.col]) rows_of_col[e.col].push_back(e.row);
        }
        for (auto& v : rows_of_col) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }

    LinearProgram work = root_lp;
    for (int j : mip.binaries) {
        work.col_lb[j] = std::max(0.0, work.col_lb[j]);
        work.col_ub[j] = std::min(1.0, work.col_ub[j]);
    }
    const std::vector<double> base_lb = work.col_lb, base_ub = work.col_ub;

    double incumbent_obj = kInf;
    LpSolution incumbent;
    bool have_incumbent = false;

    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
    long next_id = 0;

    auto root = std::make_shared<Node>();
    root->id = next_id++;
    root->depth = 0;
    root->bound = -kInf;
    if (warm_root) root->basis = std::make_shared<BasisState>(*warm_root);
    open.push(root);

    std::vector<std::pair<int, int>> fixings;
    SimplexSolver solver(opt.lp);

    auto rel_gap = [&](double ub, double lb) {
        if (!std::isfinite(ub)) return kInf;
        return (ub - lb) / std::max(1e-10, std::fabs(ub));
    };

    double global_lb = -kInf;
    bool limit_hit = false;

    auto try_incumbent = [&](const LpSolution& sol) {
        for (int j : mip.binaries) {
            double f = std::fabs(sol.x[j] - std::round(sol.x[j]));
            if (f > opt.int_tol) return;  // not integral, not an incumbent
        }
        if (sol.obj < incumbent_obj - 1e-12) {
            incumbent_obj = sol.obj;
            incumbent = sol;
            have_incumbent = true;
        }
    };

    // rounding heuristic: fix binaries to a consistent integral pattern
    auto rounding = [&](const std::vector<double>& x, const BasisState& basis) {
        if (opt.round_hint) {
            auto fixes = opt.round_hint(x);
            for (auto [col, v] : fixes) {
                work.col_lb[col] = v;
                work.col_ub[col] = v;
            }
        } else {
            for (int j : mip.binaries) {
                double v = std::round(std::min(1.0, std::max(0.0, x[j])));
                work.col_lb[j] = v;
                work.col_ub[j] = v;
            }
        }
        BasisState b = basis;
        LpSolution s = solver.solve(work, &b);
        if (s.status == LpStatus::Optimal) try_incumbent(s);
    };

    if (!opt.initial_fix.empty()) {
        work.col_lb = base_lb;
        work.col_ub = base_ub;
        for (auto [col, v] : opt.initial_fix) {
            work.col_lb[col] = v;
            work.col_ub[col] = v;
        }
        BasisState b;
        if (warm_root) b = *warm_root;
        LpSolution s = solver.solve(work, &b);
        if (s.status == LpStatus::Optimal) try_incumbent(s);
    }

    while (!open.empty()) {
        if (res.nodes >= opt.node_limit) { limit_hit = true; break; }
        auto node = open.top();
        open.pop();
        global_lb = have_incumbent ? std::min(node->bound, incumbent_obj) : node->bound;
        if (have_incumbent &&
            (node->bound >= incumbent_obj - 1e-9 * (1.0 + std::fabs(incumbent_obj)) ||
             rel_gap(incumbent_obj, node->bound) <= opt.rel_gap))
            break;  // best-bound order: nothing better remains

        res.nodes++;
        // apply fixings
        work.col_lb = base_lb;
        work.col_ub = base_ub;
        collect_fixings(node.get(), fixings);
        for (auto [c, v] : fixings) {
            work.col_lb[c] = v;
            work.col_ub[c] = v;
        }

        BasisState basis;
        if (node->basis) basis = *node->basis;
        LpSolution sol = solver.solve(work, &basis);
        if (sol.status == LpStatus::Infeasible) continue;
        if (sol.status == LpStatus::Unbounded)
            throw std::runtime_error("mip: relaxation unbounded");
        if (sol.status != LpStatus::Optimal) continue;  // numerical dead end
        if (have_incumbent && sol.obj >= incumbent_obj - 1e-9 * (1.0 + std::fabs(incumbent_obj)))
            continue;

        snap_binaries(mip, rows_of_col, row_terms, sol.x, opt.int_tol);

        // find branching candidate
        int branch = -1;
        double best_frac = opt.int_tol;
        for (int j : mip.binaries) {
            double f = std::fabs(sol.x[j] - std::round(sol.x[j]));
            if (f > best_frac) { best_frac = f; branch = j; }
        }
        if (branch < 0) {
            try_incumbent(sol);
            continue;
        }
        if (opt.rounding_heuristic && (node->depth == 0 || res.nodes % 50 == 0)) {
            rounding(sol.x, basis);
            // restore fixing bounds for children creation below
            work.col_lb = base_lb;
            work.col_ub = base_ub;
        }

        auto shared_basis = std::make_shared<BasisState>(std::move(basis));
        for (int v = 0; v <= 1; ++v) {
            auto ch = std::make_shared<Node>();
            ch->id = next_id++;
            ch->depth = node->depth + 1;
            ch->bound = sol.obj;
            ch->parent = node;
            ch->fix_col = branch;
            ch->fix_val = v;
            ch->basis = shared_basis;
            open.push(ch);
        }
    }

    if (!limit_hit && open.empty()) global_lb = have_incumbent ? incumbent_obj : kInf;
    if (!open.empty() && !have_incumbent) global_lb = open.top()->bound;

    res.node_limit_hit = limit_hit;
    if (have_incumbent) {
        res.sol = incumbent;
        res.best_bound = std::isfinite(global_lb) ? std::min(global_lb, incumbent_obj) : incumbent_obj;
        res.gap = rel_gap(incumbent_obj, res.best_bound);
        res.sol.status = LpStatus::Optimal;
    } else {
        res.sol.status = limit_hit ? LpStatus::IterLimit : LpStatus::Infeasible;
        res.best_bound = global_lb;
        res.gap = kInf;
    }
    return res;
}

}  // namespace iegs
