// Bounded-variable revised primal simplex with product-form basis updates.
// Solves min c'x  s.t.  sense-rows, lb <= x <= ub, and reports exact vertex
// duals (d obj / d rhs) and reduced costs.

#ifndef IEGS_SIMPLEX_HPP
#define IEGS_SIMPLEX_HPP

#include <cstdint>
#include <vector>

#include "iegs/lp.hpp"

namespace iegs {

struct SimplexOptions {
    double feas_tol = 1e-9;   // primal feasibility, on the equilibrated problem
    double dual_tol = 1e-9;   // reduced-cost optimality threshold
    double pivot_tol = 1e-9;  // smallest acceptable pivot magnitude
    long max_iters = -1;      // -1: automatic (scales with row count)
    int refactor_interval = 100;
    int bland_streak = 150;  // degenerate pivots before Bland's rule kicks in
    bool scale = true;
};

// Nonbasic-at-lower / nonbasic-at-upper / basic / nonbasic-free-at-zero.
enum : uint8_t { kAtLb = 0, kAtUb = 1, kBasic = 2, kFreeNb = 3 };
using BasisState = std::vector<uint8_t>;  // size n_cols + n_rows

struct LpSolveStats {
    long iterations = 0;
    long refactorizations = 0;
    int phase1_iterations = 0;
};

class SimplexSolver {
  public:
    explicit SimplexSolver(SimplexOptions opt = {}) : opt_(opt) {}

    LpSolution solve(const LinearProgram& lp);
    // Warm variant: `state` supplies the starting basis when usable and
    // receives the final basis. Cleared/rebuilt on mismatch.
    LpSolution solve(const LinearProgram& lp, BasisState* state);

    const LpSolveStats& stats() const { return stats_; }

  private:
    SimplexOptions opt_;
    LpSolveStats stats_;
};

// One-shot convenience wrapper.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {});

}  // namespace iegs

#endif
