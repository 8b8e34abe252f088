#include "iegs/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace iegs {

using nlohmann::json;

const char* to_string(Algo a) {
    switch (a) {
        case Algo::Ibd: return "ibd";
        case Algo::Bd: return "bd";
        case Algo::Pwl: return "pwl";
    }
    return "?";
}

std::optional<Algo> algo_from_string(const std::string& s) {
    if (s == "ibd") return Algo::Ibd;
    if (s == "bd") return Algo::Bd;
    if (s == "pwl") return Algo::Pwl;
    return std::nullopt;
}

SolveOptions RunConfig::solve_options() const {
    SolveOptions o;
    o.eps_feas = eps_feas;
    o.max_iter = max_iter;
    o.workers = workers;
    o.master.eq7_segments = eq7_segments;
    o.master.mip.rel_gap = mip_gap;
    return o;
}

void RunConfig::check() const {
    if (!(eps_feas > 0)) throw std::invalid_argument("eps must be > 0");
    if (!(mip_gap >= 0)) throw std::invalid_argument("mip-gap must be >= 0");
    if (max_iter < 1) throw std::invalid_argument("max-iter must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (weymouth_segments < 2) throw std::invalid_argument("segments must be >= 2");
    if (eq7_segments < 1) throw std::invalid_argument("segments-eq7 must be >= 1");
}

AlgoOutcome run_algorithm(const DispatchCase& c, const RunConfig& cfg) {
    AlgoOutcome out;
    out.algo = cfg.algo;
    SolveOptions opt = cfg.solve_options();
    switch (cfg.algo) {
        case Algo::Ibd: {
            RunResult r = run_ibd(c, opt);
            out.status = r.status;
            out.schedule = std::move(r.schedule);
            out.log = std::move(r.log);
            out.wall_seconds = r.wall_seconds;
            out.iterations = static_cast<int>(out.log.iterations.size());
            out.pressures = std::move(r.pressures);
            out.pool = std::move(r.pool);
            break;
        }
        case Algo::Bd: {
            BdResult r = run_bd(c, opt);
            out.status = r.status;
            out.schedule = std::move(r.schedule);
            out.log = std::move(r.log);
            out.wall_seconds = r.wall_seconds;
            out.iterations = static_cast<int>(out.log.iterations.size());
            out.pressures = std::move(r.pressures);
            out.pool = std::move(r.pool);
            break;
        }
        case Algo::Pwl: {
            PwlResult r = run_pwl(c, cfg.weymouth_segments, opt);
            out.status = r.status;
            out.schedule = std::move(r.schedule);
            out.wall_seconds = r.wall_seconds;
            out.iterations = 1;
            out.n_binaries = r.stats.n_binaries;
            out.n_continuous = r.stats.n_continuous;
            out.pressures = std::move(r.pressures);
            break;
        }
    }
    return out;
}

std::string solution_to_json(const DispatchCase& c, const AlgoOutcome& r) {
    json root;
    root["algo"] = to_string(r.algo);
    root["case"] = c.name;
    root["status"] = r.status == RunStatus::Converged ? "converged"
                     : r.status == RunStatus::IterLimit ? "iteration_limit"
                     : r.status == RunStatus::MasterInfeasible ? "infeasible"
                                                               : "numerical_failure";
    root["objective"] = r.schedule.objective;
    root["breakdown"] = {{"coal_cost", r.schedule.coal_cost},
                         {"gas_cost", r.schedule.gas_cost},
                         {"curtailment_cost", r.schedule.curtailment_cost}};
    auto fam = [&](const std::vector<std::vector<double>>& v) { return json(v); };
    root["schedule"] = {{"p_coal", fam(r.schedule.p_coal)},
                        {"p_gas", fam(r.schedule.p_gas)},
                        {"p_wind", fam(r.schedule.p_wind)},
                        {"p_p2g", fam(r.schedule.p_p2g)},
                        {"f_coal", fam(r.schedule.f_coal)},
                        {"f_wind", fam(r.schedule.f_wind)},
                        {"g_gas", fam(r.schedule.g_gas)},
                        {"g_pipe", fam(r.schedule.g_pipe)},
                        {"g_comp", fam(r.schedule.g_comp)},
                        {"g_comp_fuel", fam(r.schedule.g_comp_fuel)},
                        {"g_well", fam(r.schedule.g_well)},
                        {"g_storage", fam(r.schedule.g_sto)},
                        {"s_level", fam(r.schedule.s_level)},
                        {"g_p2g", fam(r.schedule.g_p2g)}};
    if (!r.pressures.empty()) root["pressures"] = json(r.pressures);
    return root.dump(2) + "\n";
}

std::string compare_to_csv(const CompareReport& rep) {
    std::ostringstream os;
    os << "algo,time_s,objective,iterations,converged,n_binaries,n_continuous\n";
    for (const auto& r : rep.rows)
        os << r.algo << "," << r.time_s << "," << r.objective << "," << r.iterations << ","
           << (r.converged ? "true" : "false") << "," << r.n_binaries << ","
           << r.n_continuous << "\n";
    return os.str();
}

std::string compare_to_json(const CompareReport& rep) {
    json root;
    root["schema_version"] = rep.schema_version;
    root["rows"] = json::array();
    for (const auto& r : rep.rows)
        root["rows"].push_back({{"algo", r.algo},
                                {"time_s", r.time_s},
                                {"objective", r.objective},
                                {"iterations", r.iterations},
                                {"converged", r.converged},
                                {"n_binaries", r.n_binaries},
                                {"n_continuous", r.n_continuous}});
    return root.dump(2) + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace iegs
