// Branch and bound over binary variables: best-bound node selection,
// most-fractional branching, depth-first dive on ties.

#ifndef IEGS_MIP_HPP
#define IEGS_MIP_HPP

#include <functional>
#include <utility>
#include <vector>

#include "iegs/lp.hpp"
#include "iegs/simplex.hpp"

namespace iegs {

struct MipOptions {
    double rel_gap = 1e-4;
    long node_limit = 200000;
    double int_tol = 1e-6;
    bool rounding_heuristic = true;
    // Model-aware rounding: maps a relaxation point to binary fixings that
    // are mutually consistent (e.g. prefix patterns of incremental
    // linearizations). Falls back to nearest-integer rounding when unset.
    std::function<std::vector<std::pair<int, int>>(const std::vector<double>&)> round_hint;
    // Fixings probed once before the search for a starting incumbent.
    std::vector<std::pair<int, int>> initial_fix;
    SimplexOptions lp;
};

MipResult solve_mip(const MixedIntegerProgram& mip, const MipOptions& opt = {},
                    const BasisState* warm_root = nullptr);

}  // namespace iegs

#endif
