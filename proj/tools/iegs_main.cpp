// iegs: solves the coupled electricity-gas dispatch problem with a choice of
// algorithms, compares them, and generates synthetic cases.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iegs/report.hpp"

using namespace iegs;

namespace {

int do_solve(const std::string& case_path, RunConfig cfg) {
    DispatchCase c;
    try {
        c = load_case(case_path);
    } catch (const CaseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    cfg.check();
    AlgoOutcome r = run_algorithm(c, cfg);

    atomic_write(cfg.out_dir + "/solution.json", solution_to_json(c, r));
    {
        std::ostringstream csv;
        write_convergence_csv(r.log, csv);
        atomic_write(cfg.out_dir + "/convergence.csv", csv.str());
    }
    std::ostringstream sum;
    sum << "case: " << c.name << "\nalgo: " << to_string(cfg.algo) << "\nobjective: "
        << r.schedule.objective << "\niterations: " << r.iterations
        << "\nwall_seconds: " << r.wall_seconds << "\nstatus: "
        << (r.status == RunStatus::Converged ? "converged"
            : r.status == RunStatus::IterLimit ? "iteration_limit"
            : r.status == RunStatus::MasterInfeasible ? "infeasible"
                                                      : "numerical_failure")
        << "\n";
    atomic_write(cfg.out_dir + "/summary.txt", sum.str());
    std::cout << sum.str();

    switch (r.status) {
        case RunStatus::Converged: return kExitOk;
        case RunStatus::MasterInfeasible: return kExitInfeasible;
        case RunStatus::IterLimit: return kExitNotConverged;
        case RunStatus::NumFail: return kExitInternal;
    }
    return kExitInternal;
}

int do_compare(const std::string& case_path, const std::vector<std::string>& algos,
               RunConfig cfg, int reps) {
    if (algos.size() < 2) {
        std::cerr << "input error: compare needs at least two algorithms\n";
        return kExitInputError;
    }
    DispatchCase c;
    try {
        c = load_case(case_path);
    } catch (const CaseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    cfg.check();

    CompareReport rep;
    for (const auto& name : algos) {
        auto a = algo_from_string(name);
        if (!a) {
            std::cerr << "input error: unknown algorithm '" << name << "'\n";
            return kExitInputError;
        }
        RunConfig rc = cfg;
        rc.algo = *a;
        CompareRow row;
        row.algo = name;
        try {
            // one warm-up run excluded from timing, then the median of reps
            AlgoOutcome last;
            std::vector<double> times;
            AlgoOutcome warm = run_algorithm(c, rc);
            last = warm;
            for (int i = 0; i < reps; ++i) {
                AlgoOutcome r = run_algorithm(c, rc);
                times.push_back(r.wall_seconds);
                last = std::move(r);
            }
            std::sort(times.begin(), times.end());
            row.time_s = times.empty() ? warm.wall_seconds : times[times.size() / 2];
            row.objective = last.schedule.objective;
            row.iterations = last.iterations;
            row.converged = last.status == RunStatus::Converged;
            row.n_binaries = last.n_binaries;
            row.n_continuous = last.n_continuous;
            {
                std::ostringstream csv;
                write_convergence_csv(last.log, csv);
                atomic_write(cfg.out_dir + "/convergence_" + name + ".csv", csv.str());
            }
        } catch (const std::exception& e) {
            std::cerr << "run '" << name << "' failed: " << e.what() << "\n";
            row.converged = false;
            row.objective = std::nan("");
        }
        rep.rows.push_back(row);
    }
    atomic_write(cfg.out_dir + "/compare.csv", compare_to_csv(rep));
    atomic_write(cfg.out_dir + "/compare.json", compare_to_json(rep));
    std::cout << compare_to_csv(rep);
    return kExitOk;
}

int do_gencase(int pipelines, uint64_t seed, const std::string& out_path) {
    if (pipelines < 1) {
        std::cerr << "input error: pipelines must be >= 1\n";
        return kExitInputError;
    }
    DispatchCase c = generate_case(pipelines, seed);
    try {
        atomic_write(out_path, serialize_case(c));
    } catch (const std::exception& e) {
        std::cerr << "cannot write " << out_path << ": " << e.what() << "\n";
        return kExitInputError;
    }
    std::cout << "wrote " << out_path << " (" << pipelines << " pipelines, seed " << seed
              << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integrated electricity-gas dispatch solvers"};
    app.require_subcommand(1);

    std::string case_path, algo = "ibd", out_dir = ".";
    std::vector<std::string> algos;
    RunConfig cfg;
    int reps = 3;
    int pipelines = 8;
    uint64_t seed = 1;
    std::string gen_out = "case.json";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--eps", cfg.eps_feas, "feasibility tolerance");
        cmd->add_option("--max-iter", cfg.max_iter, "iteration cap");
        cmd->add_option("--segments", cfg.weymouth_segments, "Weymouth linearization segments");
        cmd->add_option("--segments-eq7", cfg.eq7_segments, "consumption-curve segments");
        cmd->add_option("--workers", cfg.workers, "parallel subproblem workers");
        cmd->add_option("--mip-gap", cfg.mip_gap, "relative MIP gap");
        cmd->add_option("--seed", cfg.seed, "random seed");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one case");
    solve->add_option("--case", case_path, "case file")->required();
    solve->add_option("--algo", algo, "ibd | bd | pwl");
    add_common(solve);

    CLI::App* compare = app.add_subcommand("compare", "run several algorithms on one case");
    compare->add_option("--case", case_path, "case file")->required();
    compare->add_option("--algos", algos, "algorithms to compare")->delimiter(',');
    compare->add_option("--reps", reps, "timed repetitions (median reported)");
    add_common(compare);

    CLI::App* gen = app.add_subcommand("gencase", "write a synthetic case");
    gen->add_option("pipelines", pipelines, "pipeline count")->required();
    gen->add_option("seed", seed, "generator seed")->required();
    gen->add_option("out", gen_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        cfg.out_dir = out_dir;
        if (solve->parsed()) {
            auto a = algo_from_string(algo);
            if (!a) {
                std::cerr << "input error: unknown algorithm '" << algo << "'\n";
                return kExitInputError;
            }
            cfg.algo = *a;
            return do_solve(case_path, cfg);
        }
        if (compare->parsed()) return do_compare(case_path, algos, cfg, reps);
        if (gen->parsed()) return do_gencase(pipelines, seed, gen_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInputError;
}
