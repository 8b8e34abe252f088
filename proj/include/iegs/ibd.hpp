// Multi-cut Benders scheme with per-period linear gas-feasibility
// subproblems solved concurrently, dual-based infeasibility cuts and the
// outer convergence loop.

#ifndef IEGS_IBD_HPP
#define IEGS_IBD_HPP

#include <optional>
#include <vector>

#include "iegs/master.hpp"
#include "iegs/netmodel.hpp"

namespace iegs {

// Pressure-feasibility check for one period with flows fixed: variables are
// the squared nodal pressures plus two mismatch slacks per pipeline.
struct FeasibilitySubproblem {
    int t = 0;
    std::vector<double> anchors;  // fixed pipeline flows
    LinearProgram lp;
    std::vector<int> pi_cols;      // per node
    std::vector<int> slack_up;     // L1 per pipeline
    std::vector<int> slack_dn;     // L2 per pipeline
    std::vector<int> weymouth_rows;
};

FeasibilitySubproblem build_subproblem(const DispatchCase& c,
                                       const std::vector<double>& anchors, int t);

struct FeasibilityCheck {
    double mismatch = 0.0;            // optimal sum of slacks
    std::vector<double> duals;        // per Weymouth row, d mismatch / d rhs
    std::vector<double> residual;     // per-pipeline slack sum L1 + L2
    std::vector<double> pressures;    // certifying squared pressures
    bool ok = false;                  // LP solved to optimality
};

// Scaled convergence test shared by the decomposition loops: a period is
// violated when any pipeline's mismatch exceeds eps * (1 + |G|G||).
bool period_violated(const std::vector<double>& residual,
                     const std::vector<double>& anchors, double eps_feas);

FeasibilityCheck check_feasibility(const FeasibilitySubproblem& sp);

// Eq-free description: returns a cut when the mismatch exceeds the scaled
// tolerance, none otherwise. Slope is sigma_l * u_l with sigma_l = 2|anchor_l|
// (secant slope near zero anchors).
std::optional<InfeasibilityCut> make_cut(double mismatch, const std::vector<double>& duals,
                                         const std::vector<double>& anchors, int t,
                                         double eps_feas, int iteration);

struct IterationRecord {
    int iteration = 0;
    double master_objective = 0.0;
    std::vector<double> mismatch;  // per period
    int cuts_added = 0;
    double t_master_ms = 0.0;
    double t_sub_ms = 0.0;
    double t_total_ms = 0.0;  // cumulative wall time
};

struct ConvergenceLog {
    std::vector<IterationRecord> iterations;
    bool converged = false;
};

void write_convergence_csv(const ConvergenceLog& log, std::ostream& os);

struct SolveOptions {
    double eps_feas = 1e-4;  // scaled mismatch tolerance
    int max_iter = 60;
    int workers = 4;
    MasterConfig master;
};

enum class RunStatus { Converged, IterLimit, MasterInfeasible, NumFail };

struct RunResult {
    RunStatus status = RunStatus::NumFail;
    Schedule schedule;
    ConvergenceLog log;
    CutPool pool;
    // certifying pressures from the final subproblem sweep, [t][node]
    std::vector<std::vector<double>> pressures;
    double wall_seconds = 0.0;
    std::vector<int> infeasible_rows;
};

RunResult run_ibd(const DispatchCase& c, const SolveOptions& opt = {});

// Max scaled Weymouth residual |G|G| - k (pi_i - pi_j)| / (1 + |G|G||) over
// pipelines and periods, evaluated with the certifying pressures.
double weymouth_residual(const DispatchCase& c, const Schedule& s,
                         const std::vector<std::vector<double>>& pressures);

// Max scaled violation of pressure bounds and compression-ratio limits.
double pressure_residual(const DispatchCase& c,
                         const std::vector<std::vector<double>>& pressures);

}  // namespace iegs

#endif
