// Run configuration, artifact writers (solution JSON, convergence CSV,
// comparison reports) and atomic file output.

#ifndef IEGS_REPORT_HPP
#define IEGS_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "iegs/baselines.hpp"
#include "iegs/ibd.hpp"

namespace iegs {

enum class Algo { Ibd, Bd, Pwl };

const char* to_string(Algo a);
std::optional<Algo> algo_from_string(const std::string& s);

struct RunConfig {
    Algo algo = Algo::Ibd;
    double eps_feas = 1e-4;
    int max_iter = 60;
    int weymouth_segments = 56;
    int eq7_segments = 10;
    int workers = 4;
    double mip_gap = 1e-4;
    uint64_t seed = 1;
    std::string out_dir = ".";

    SolveOptions solve_options() const;
    void check() const;  // throws std::invalid_argument
};

// exit codes shared by the command-line tool; stable contract
enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 2,
    kExitInfeasible = 3,
    kExitNotConverged = 4,
    kExitInternal = 5,
};

struct AlgoOutcome {
    Algo algo;
    RunStatus status = RunStatus::NumFail;
    Schedule schedule;
    ConvergenceLog log;
    double wall_seconds = 0.0;
    int iterations = 0;
    int n_binaries = 0;
    int n_continuous = 0;
    std::vector<std::vector<double>> pressures;
    CutPool pool;
};

// Runs one algorithm; wall time is measured around the solve only.
AlgoOutcome run_algorithm(const DispatchCase& c, const RunConfig& cfg);

std::string solution_to_json(const DispatchCase& c, const AlgoOutcome& r);

struct CompareRow {
    std::string algo;
    double time_s = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    int n_binaries = 0;
    int n_continuous = 0;
};

struct CompareReport {
    int schema_version = 1;
    std::vector<CompareRow> rows;
};

std::string compare_to_csv(const CompareReport& rep);
std::string compare_to_json(const CompareReport& rep);

// Writes through a temp file + rename so a crash never leaves a truncated
// artifact behind.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace iegs

#endif
