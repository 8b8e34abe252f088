#include "iegs/ibd.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "iegs/simplex.hpp"

namespace iegs {

FeasibilitySubproblem build_subproblem(const DispatchCase& c,
                                       const std::vector<double>& anchors, int t) {
    const GasSystem& gs = c.gas;
    if (anchors.size() != gs.pipelines.size())
        throw std::invalid_argument("build_subproblem: one anchor per pipeline required");
    FeasibilitySubproblem sp;
    sp.t = t;
    sp.anchors = anchors;
    for (const auto& n : gs.nodes)
        sp.pi_cols.push_back(sp.lp.add_col(0.0, n.pi_min, n.pi_max));
    for (size_t l = 0; l < gs.pipelines.size(); ++l) {
        sp.slack_up.push_back(sp.lp.add_col(1.0, 0.0, kInf));
        sp.slack_dn.push_back(sp.lp.add_col(1.0, 0.0, kInf));
    }
    for (size_t l = 0; l < gs.pipelines.size(); ++l) {
        const auto& pl = gs.pipelines[l];
        double theta = anchors[l] * std::fabs(anchors[l]);
        // k pi_i - k pi_j + L1 - L2 = G|G|
        int r = sp.lp.add_row(RowSense::EQ, theta);
        sp.lp.add_term(r, sp.pi_cols[pl.from], pl.k);
        sp.lp.add_term(r, sp.pi_cols[pl.to], -pl.k);
        sp.lp.add_term(r, sp.slack_up[l], 1.0);
        sp.lp.add_term(r, sp.slack_dn[l], -1.0);
        sp.weymouth_rows.push_back(r);
    }
    for (const auto& cm : gs.compressors) {
        // r_min pi_in <= pi_out <= r_max pi_in
        int r1 = sp.lp.add_row(RowSense::GE, 0.0);
        sp.lp.add_term(r1, sp.pi_cols[cm.to], 1.0);
        sp.lp.add_term(r1, sp.pi_cols[cm.from], -cm.r_min);
        int r2 = sp.lp.add_row(RowSense::LE, 0.0);
        sp.lp.add_term(r2, sp.pi_cols[cm.to], 1.0);
        sp.lp.add_term(r2, sp.pi_cols[cm.from], -cm.r_max);
    }
    return sp;
}

FeasibilityCheck check_feasibility(const FeasibilitySubproblem& sp) {
    FeasibilityCheck out;
    LpSolution s = solve_lp(sp.lp);
    if (s.status != LpStatus::Optimal) return out;  // bounded by construction
    out.ok = true;
    out.mismatch = s.obj;
    for (int r : sp.weymouth_rows) out.duals.push_back(s.row_dual[r]);
    for (size_t l = 0; l < sp.slack_up.size(); ++l)
        out.residual.push_back(s.x[sp.slack_up[l]] + s.x[sp.slack_dn[l]]);
    for (int cidx : sp.pi_cols) out.pressures.push_back(s.x[cidx]);
    return out;
}

bool period_violated(const std::vector<double>& residual,
                     const std::vector<double>& anchors, double eps_feas) {
    for (size_t l = 0; l < residual.size(); ++l) {
        double theta = anchors[l] * std::fabs(anchors[l]);
        if (residual[l] > eps_feas * (1.0 + std::fabs(theta))) return true;
    }
    return false;
}

std::optional<InfeasibilityCut> make_cut(double mismatch, const std::vector<double>& duals,
                                         const std::vector<double>& anchors, int t,
                                         double eps_feas, int iteration) {
    if (mismatch <= eps_feas) return std::nullopt;
    InfeasibilityCut cut;
    cut.t = t;
    cut.g = mismatch;
    cut.anchor = anchors;
    cut.iteration = iteration;
    cut.slope.resize(anchors.size());
    for (size_t l = 0; l < anchors.size(); ++l) {
        double sigma = 2.0 * std::fabs(anchors[l]);
        if (std::fabs(anchors[l]) < 1e-6 && duals[l] != 0.0) {
            // G|G| is flat at the origin; a two-sided secant keeps the cut
            // informative without excluding the origin
            const double delta = 1e-3;
            sigma = delta;
        }
        cut.slope[l] = sigma * duals[l];
    }
    return cut;
}

void write_convergence_csv(const ConvergenceLog& log, std::ostream& os) {
    os << "iter,master_obj,max_mismatch,cuts_added,t_master_ms,t_sub_ms,t_total_ms\n";
    for (const auto& it : log.iterations) {
        double mx = 0.0;
        for (double g : it.mismatch) mx = std::max(mx, g);
        os << it.iteration << "," << it.master_objective << "," << mx << ","
           << it.cuts_added << "," << it.t_master_ms << "," << it.t_sub_ms << ","
           << it.t_total_ms << "\n";
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

RunResult run_ibd(const DispatchCase& c, const SolveOptions& opt) {
    RunResult out;
    const auto t_start = Clock::now();
    const int T = c.n_periods;
    const int n_pipe = static_cast<int>(c.gas.pipelines.size());
    OaPool oa;
    oa.init(c);
    BasisState warm;

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        IterationRecord rec;
        rec.iteration = iter;

        auto t_master = Clock::now();
        MasterModel model = build_master(c, out.pool, oa, opt.master);
        // the structural prefix is identical between iterations; a stale
        // basis would still mismatch on appended cut rows, so reuse only when
        // sizes line up (solve_master extends for rows it appends itself)
        BasisState* warm_ptr = nullptr;
        if (warm.size() == static_cast<size_t>(model.mip.lp.n_cols) + model.mip.lp.n_rows() ||
            warm.empty())
            warm_ptr = &warm;
        MasterResult mres = solve_master(model, c, oa, opt.master, warm_ptr);
        rec.t_master_ms = ms_since(t_master);
        if (mres.status == MasterStatus::Infeasible) {
            out.status = RunStatus::MasterInfeasible;
            out.infeasible_rows = mres.infeasible_rows;
            out.log.iterations.push_back(rec);
            out.wall_seconds = ms_since(t_start) / 1e3;
            return out;
        }
        if (mres.status != MasterStatus::Optimal) {
            out.status = RunStatus::NumFail;
            out.log.iterations.push_back(rec);
            out.wall_seconds = ms_since(t_start) / 1e3;
            return out;
        }
        rec.master_objective = mres.schedule.objective;

        // concurrent per-period feasibility batch
        auto t_sub = Clock::now();
        std::vector<FeasibilityCheck> checks(T);
        std::vector<std::vector<double>> anchors(T);
        for (int t = 0; t < T; ++t) anchors[t] = extract_flows(mres.schedule, t);
        {
            std::atomic<int> next{0};
            int n_workers = std::max(1, std::min(opt.workers, T));
            auto worker = [&]() {
                while (true) {
                    int t = next.fetch_add(1);
                    if (t >= T) break;
                    FeasibilitySubproblem sp = build_subproblem(c, anchors[t], t);
                    checks[t] = check_feasibility(sp);
                }
            };
            if (n_workers == 1) {
                worker();
            } else {
                std::vector<std::thread> pool_threads;
                for (int i = 0; i < n_workers; ++i) pool_threads.emplace_back(worker);
                for (auto& th : pool_threads) th.join();
            }
        }
        rec.t_sub_ms = ms_since(t_sub);

        // collect in ascending period order regardless of completion order
        rec.mismatch.resize(T, 0.0);
        int added = 0;
        bool failed = false;
        for (int t = 0; t < T; ++t) {
            if (!checks[t].ok) {
                // one retry with tighter scaling, then give up
                FeasibilitySubproblem sp = build_subproblem(c, anchors[t], t);
                SimplexOptions tight;
                tight.feas_tol = 1e-11;
                tight.pivot_tol = 1e-11;
                LpSolution s2 = solve_lp(sp.lp, tight);
                if (s2.status != LpStatus::Optimal) {
                    failed = true;
                    break;
                }
                checks[t].ok = true;
                checks[t].mismatch = s2.obj;
                checks[t].duals.clear();
                for (int r : sp.weymouth_rows) checks[t].duals.push_back(s2.row_dual[r]);
                checks[t].residual.clear();
                for (size_t l = 0; l < sp.slack_up.size(); ++l)
                    checks[t].residual.push_back(s2.x[sp.slack_up[l]] + s2.x[sp.slack_dn[l]]);
                checks[t].pressures.clear();
                for (int cidx : sp.pi_cols) checks[t].pressures.push_back(s2.x[cidx]);
            }
            rec.mismatch[t] = checks[t].mismatch;
            if (period_violated(checks[t].residual, anchors[t], opt.eps_feas)) {
                auto cut = make_cut(checks[t].mismatch, checks[t].duals, anchors[t], t,
                                    0.0, iter);
                if (cut) {
                    out.pool.period_cuts.push_back(std::move(*cut));
                    added++;
                }
            }
        }
        if (failed) {
            out.status = RunStatus::NumFail;
            out.log.iterations.push_back(rec);
            out.wall_seconds = ms_since(t_start) / 1e3;
            return out;
        }
        rec.cuts_added = added;
        rec.t_total_ms = ms_since(t_start);
        out.log.iterations.push_back(rec);

        if (added == 0) {
            // this sweep is the certificate
            out.status = RunStatus::Converged;
            out.log.converged = true;
            out.schedule = mres.schedule;
            out.pressures.assign(T, {});
            for (int t = 0; t < T; ++t) out.pressures[t] = checks[t].pressures;
            out.wall_seconds = ms_since(t_start) / 1e3;
            return out;
        }
        out.schedule = mres.schedule;  // best so far
        out.pressures.assign(T, {});
        for (int t = 0; t < T; ++t) out.pressures[t] = checks[t].pressures;
        (void)n_pipe;
    }
    out.status = RunStatus::IterLimit;
    out.wall_seconds = ms_since(t_start) / 1e3;
    return out;
}

double weymouth_residual(const DispatchCase& c, const Schedule& s,
                         const std::vector<std::vector<double>>& pressures) {
    double worst = 0.0;
    for (int t = 0; t < c.n_periods; ++t) {
        for (size_t l = 0; l < c.gas.pipelines.size(); ++l) {
            const auto& pl = c.gas.pipelines[l];
            double g = s.g_pipe[t][l];
            double theta = g * std::fabs(g);
            double res = std::fabs(theta - pl.k * (pressures[t][pl.from] - pressures[t][pl.to]));
            worst = std::max(worst, res / (1.0 + std::fabs(theta)));
        }
    }
    return worst;
}

double pressure_residual(const DispatchCase& c,
                         const std::vector<std::vector<double>>& pressures) {
    double worst = 0.0;
    auto upd = [&](double viol, double scale) {
        worst = std::max(worst, std::max(0.0, viol) / (1.0 + std::fabs(scale)));
    };
    for (int t = 0; t < c.n_periods; ++t) {
        for (size_t n = 0; n < c.gas.nodes.size(); ++n) {
            upd(c.gas.nodes[n].pi_min - pressures[t][n], c.gas.nodes[n].pi_min);
            upd(pressures[t][n] - c.gas.nodes[n].pi_max, c.gas.nodes[n].pi_max);
        }
        for (const auto& cm : c.gas.compressors) {
            double pi_in = pressures[t][cm.from], pi_out = pressures[t][cm.to];
            upd(cm.r_min * pi_in - pi_out, pi_out);
            upd(pi_out - cm.r_max * pi_in, pi_out);
        }
    }
    return worst;
}

}  // namespace iegs
