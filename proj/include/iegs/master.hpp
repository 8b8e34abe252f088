// Dispatch master problem: power-system constraints, linearized unit curves,
// gas-network balance without the Weymouth relation, accumulated feasibility
// cuts, and schedule extraction.

#ifndef IEGS_MASTER_HPP
#define IEGS_MASTER_HPP

#include <string>
#include <vector>

#include "iegs/mip.hpp"
#include "iegs/netmodel.hpp"
#include "iegs/pwl.hpp"
#include "iegs/simplex.hpp"

namespace iegs {

// Stable bijection variable <-> (family, element, period): per-period blocks
// of structural variables first, linearization auxiliaries appended after, so
// cut rows written against flow variables survive rebuilds.
struct MasterLayout {
    int T = 0;
    int n_coal = 0, n_gas = 0, n_wind = 0, n_p2g = 0;
    int n_pipe = 0, n_comp = 0, n_well = 0, n_sto = 0;
    int block = 0;  // structural variables per period

    int off_p_coal, off_p_gas, off_p_wind, off_p_p2g;
    int off_f_coal, off_f_wind, off_g_gas;
    int off_g_pipe, off_g_comp, off_g_comp_fuel;
    int off_g_well, off_g_sto, off_s_level, off_g_p2g;

    int at(int t, int off, int i) const { return t * block + off + i; }
    int p_coal(int t, int i) const { return at(t, off_p_coal, i); }
    int p_gas(int t, int j) const { return at(t, off_p_gas, j); }
    int p_wind(int t, int n) const { return at(t, off_p_wind, n); }
    int p_p2g(int t, int k) const { return at(t, off_p_p2g, k); }
    int f_coal(int t, int i) const { return at(t, off_f_coal, i); }
    int f_wind(int t, int n) const { return at(t, off_f_wind, n); }
    int g_gas(int t, int j) const { return at(t, off_g_gas, j); }
    int g_pipe(int t, int l) const { return at(t, off_g_pipe, l); }
    int g_comp(int t, int m) const { return at(t, off_g_comp, m); }
    int g_comp_fuel(int t, int m) const { return at(t, off_g_comp_fuel, m); }
    int g_well(int t, int s) const { return at(t, off_g_well, s); }
    int g_sto(int t, int z) const { return at(t, off_g_sto, z); }
    int s_level(int t, int z) const { return at(t, off_s_level, z); }
    int g_p2g(int t, int k) const { return at(t, off_g_p2g, k); }

    static MasterLayout of(const DispatchCase& c);
};

// One feasibility cut in period-local pipeline-flow variables:
//   g + sum_l slope_l (G_{t,l} - anchor_l) <= 0.
struct InfeasibilityCut {
    int t = 0;
    double g = 0.0;
    std::vector<double> slope;   // sigma_l * u_l per pipeline
    std::vector<double> anchor;  // flows the cut was generated at
    int iteration = 0;
};

// Aggregated over all periods, one row: sum_t [g_t + slope_t . (G_t - anchor_t)] <= 0.
struct AggregateCut {
    double g_total = 0.0;
    std::vector<std::vector<double>> slope;   // [t][pipeline]
    std::vector<std::vector<double>> anchor;  // [t][pipeline]
    int iteration = 0;
};

struct CutPool {
    std::vector<InfeasibilityCut> period_cuts;
    std::vector<AggregateCut> aggregate_cuts;
    size_t size() const { return period_cuts.size() + aggregate_cuts.size(); }
};

// Outer-approximation tangent points for each coal unit's cost epigraph,
// per unit per period; grows monotonically across master solves.
struct OaPool {
    std::vector<std::vector<std::vector<double>>> points;  // [unit][t] -> p-bars
    void init(const DispatchCase& c);
    bool empty() const { return points.empty(); }
};

struct MasterConfig {
    int eq7_segments = 10;   // gas-unit consumption linearization
    MipOptions mip;
};

struct MasterModel {
    MixedIntegerProgram mip;
    MasterLayout layout;
    int n_structural_rows = 0;  // rows before OA/cut sections (stable prefix)
    std::vector<std::string> row_names;
    // OA rows bookkeeping for refinement: row index <-> (unit, t)
    struct OaRow {
        int unit, t;
        double p_bar;
    };
    std::vector<OaRow> oa_rows;
};

MasterModel build_master(const DispatchCase& c, const CutPool& pool, const OaPool& oa,
                         const MasterConfig& cfg);

struct Schedule {
    double objective = 0.0;
    double coal_cost = 0.0, gas_cost = 0.0, curtailment_cost = 0.0;
    // [t][element]
    std::vector<std::vector<double>> p_coal, p_gas, p_wind, p_p2g;
    std::vector<std::vector<double>> f_coal, f_wind, g_gas;
    std::vector<std::vector<double>> g_pipe, g_comp, g_comp_fuel;
    std::vector<std::vector<double>> g_well, g_sto, s_level, g_p2g;
};

enum class MasterStatus { Optimal, Infeasible, NumFail };

struct MasterResult {
    MasterStatus status = MasterStatus::NumFail;
    Schedule schedule;
    std::vector<double> raw_x;         // full variable vector of the solve
    std::vector<int> infeasible_rows;  // deletion-filtered subset, best effort
    long mip_nodes = 0;
    int oa_passes = 0;
};

// Solves the master; iterates outer approximation of the coal-cost epigraphs
// until max violation <= 1e-6 (1 + |F|). New tangents are recorded in `oa`
// so subsequent builds keep them. `warm` (optional) is reused and updated.
MasterResult solve_master(MasterModel& model, const DispatchCase& c, OaPool& oa,
                          const MasterConfig& cfg, BasisState* warm = nullptr);

// Pipeline-flow slice of a schedule for one period, in pipeline order.
std::vector<double> extract_flows(const Schedule& s, int t);

// Max scaled residual of every master constraint at the schedule.
double schedule_residual(const DispatchCase& c, const Schedule& s);

// Objective breakdown recomputed from first principles (exact quadratics).
double true_cost(const DispatchCase& c, const Schedule& s);

}  // namespace iegs

#endif
