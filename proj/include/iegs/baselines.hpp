// Comparison algorithms: single-cut Benders with a nonconvex Newton-Raphson
// gas subproblem, the monolithic piecewise-linearized model, and a
// brute-force grid oracle for tiny cases.

#ifndef IEGS_BASELINES_HPP
#define IEGS_BASELINES_HPP

#include <optional>

#include "iegs/ibd.hpp"
#include "iegs/master.hpp"
#include "iegs/netmodel.hpp"

namespace iegs {

// ---- monolithic piecewise-linearized model

struct PwlRunStats {
    int n_binaries = 0;
    int n_continuous = 0;
    long nodes = 0;
    double gap = 0.0;
};

struct PwlResult {
    RunStatus status = RunStatus::NumFail;
    Schedule schedule;
    PwlRunStats stats;
    double wall_seconds = 0.0;
    std::vector<std::vector<double>> pressures;  // [t][node]
};

// Full master model plus pressure variables, compression-ratio rows and a
// per-pipeline-period incremental linearization of G|G| = k (pi_i - pi_j)
// over the admissible flow range.
PwlResult run_pwl(const DispatchCase& c, int weymouth_segments, const SolveOptions& opt = {});

// ---- single-cut Benders with an all-period nonlinear gas subproblem

// Joint state over the whole horizon with master-fixed flows and coupling
// quantities held constant: squared pressures, one signed Weymouth slack per
// pipeline, compressor throughput and fuel, storage exchange and level, well
// outputs.
struct BdSubproblemState {
    int n_periods = 0;
    int vars_per_period = 0;  // N_n + N_i + 2 N_c + 2 N_r + N_s
    std::vector<double> x;    // stacked per period
    // layout offsets inside one period block
    int off_pi = 0, off_slack = 0, off_comp = 0, off_comp_fuel = 0;
    int off_sto = 0, off_level = 0, off_well = 0;

    int idx(int t, int off, int i) const { return t * vars_per_period + off + i; }
    int size() const { return n_periods * vars_per_period; }
};

struct NewtonConfig {
    double damping = 0.5;      // step shrink factor on merit increase
    int max_halvings = 10;
    int max_nr_iter = 80;
    double grad_tol = 1e-8;    // stationarity, scaled
    double bound_penalty = 1e4;
    double equality_penalty = 1e6;
};

struct NewtonResult {
    bool converged = false;
    BdSubproblemState state;
    std::vector<std::vector<double>> weymouth_residual;  // [t][pipeline], signed
    std::vector<double> period_mismatch;                 // sum |residual| per t
    double grad_norm = 0.0;
    int iterations = 0;
};

// Builds the initial state from a schedule (master values, flat pressures
// when flat_start is set) and minimizes the slack-penalized merit by damped
// Newton steps. Divergence is reported, never a silent partial result.
BdSubproblemState make_bd_state(const DispatchCase& c, const Schedule& s, bool flat_start);
NewtonResult newton_gas(const DispatchCase& c, const Schedule& s, BdSubproblemState init,
                        const NewtonConfig& cfg = {});

struct BdResult {
    RunStatus status = RunStatus::NumFail;
    Schedule schedule;
    ConvergenceLog log;
    CutPool pool;
    double wall_seconds = 0.0;
    bool newton_diverged = false;
    std::vector<std::vector<double>> pressures;
};

RunResult run_ibd(const DispatchCase& c, const SolveOptions& opt);  // fwd (ibd.hpp)
BdResult run_bd(const DispatchCase& c, const SolveOptions& opt = {});

// ---- brute-force oracle for tiny cases

struct OracleResult {
    bool found = false;
    double objective = 0.0;
    double grid_step = 0.0;   // normalized step actually used
    long points_scanned = 0;
};

// Grid search over the free decision variables of a single-period case with
// at most two pipelines, evaluating every constraint directly (exact
// Weymouth). Pinned variables are eliminated through the equalities first.
// Throws std::invalid_argument when the case is out of the oracle's scope or
// the enumeration budget (1e8 points) would be exceeded.
OracleResult brute_force(const DispatchCase& c, double grid_step);

}  // namespace iegs

#endif
