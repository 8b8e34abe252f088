#include <chrono>
#include <cmath>

#include "iegs/baselines.hpp"

namespace iegs {

namespace {
using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}
}  // namespace

BdResult run_bd(const DispatchCase& c, const SolveOptions& opt) {
    BdResult out;
    out.status = RunStatus::IterLimit;  // unless a break path decides otherwise
    const auto t_start = Clock::now();
    const int T = c.n_periods;
    const int n_pipe = static_cast<int>(c.gas.pipelines.size());
    OaPool oa;
    oa.init(c);

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        IterationRecord rec;
        rec.iteration = iter;

        auto t_master = Clock::now();
        MasterModel model = build_master(c, out.pool, oa, opt.master);
        MasterResult mres = solve_master(model, c, oa, opt.master);
        rec.t_master_ms = ms_since(t_master);
        if (mres.status == MasterStatus::Infeasible) {
            out.status = RunStatus::MasterInfeasible;
            out.log.iterations.push_back(rec);
            break;
        }
        if (mres.status != MasterStatus::Optimal) {
            out.status = RunStatus::NumFail;
            out.log.iterations.push_back(rec);
            break;
        }
        rec.master_objective = mres.schedule.objective;
        out.schedule = mres.schedule;

        // one nonlinear all-period subproblem
        auto t_sub = Clock::now();
        NewtonConfig ncfg;
        NewtonResult nr = newton_gas(c, mres.schedule, make_bd_state(c, mres.schedule, false), ncfg);
        if (!nr.converged) {
            NewtonResult retry =
                newton_gas(c, mres.schedule, make_bd_state(c, mres.schedule, true), ncfg);
            if (retry.converged) {
                nr = std::move(retry);
            } else {
                out.newton_diverged = true;
                out.status = RunStatus::NumFail;
                rec.t_sub_ms = ms_since(t_sub);
                rec.t_total_ms = ms_since(t_start);
                out.log.iterations.push_back(rec);
                break;
            }
        }
        rec.t_sub_ms = ms_since(t_sub);
        rec.mismatch = nr.period_mismatch;

        double total = 0.0;
        for (double g : nr.period_mismatch) total += g;
        bool any_violated = false;
        for (int t = 0; t < T && !any_violated; ++t) {
            std::vector<double> res(n_pipe);
            for (int l = 0; l < n_pipe; ++l) res[l] = std::fabs(nr.weymouth_residual[t][l]);
            any_violated = period_violated(res, extract_flows(mres.schedule, t), opt.eps_feas);
        }

        out.pressures.assign(T, {});
        for (int t = 0; t < T; ++t) {
            out.pressures[t].resize(c.gas.nodes.size());
            for (size_t n = 0; n < c.gas.nodes.size(); ++n)
                out.pressures[t][n] =
                    nr.state.x[nr.state.idx(t, nr.state.off_pi, static_cast<int>(n))];
        }

        if (!any_violated) {
            rec.cuts_added = 0;
            rec.t_total_ms = ms_since(t_start);
            out.log.iterations.push_back(rec);
            out.status = RunStatus::Converged;
            out.log.converged = true;
            break;
        }

        // One aggregated cut per iteration: the sum of per-period gradient
        // cuts of the squared-slack value function (convex in the lifted
        // flows theta = G|G|, gradient w_t), each rescaled by its period's
        // 1/||w_t||_inf so the deepest slope per period stays at +-1 and the
        // row does not flatten out near the feasible boundary. Positive
        // rescaling and summation both preserve validity.
        AggregateCut cut;
        cut.g_total = 0.0;
        cut.iteration = iter;
        cut.slope.assign(T, std::vector<double>(n_pipe, 0.0));
        cut.anchor.assign(T, std::vector<double>(n_pipe, 0.0));
        for (int t = 0; t < T; ++t) {
            auto anchors = extract_flows(mres.schedule, t);
            for (int l = 0; l < n_pipe; ++l) cut.anchor[t][l] = anchors[l];
            double winf = 0.0, theta_max = 1.0;
            for (int l = 0; l < n_pipe; ++l) {
                winf = std::max(winf, std::fabs(nr.weymouth_residual[t][l]));
                theta_max = std::max(theta_max, anchors[l] * anchors[l]);
            }
            if (winf <= 1e-9 * theta_max) continue;  // period feasible, no contribution
            for (int l = 0; l < n_pipe; ++l) {
                double w = nr.weymouth_residual[t][l];
                cut.g_total += 0.5 * w * w / winf;
                double u = w / winf;
                if (std::fabs(u) < 1e-9) u = 0.0;
                double sigma = 2.0 * std::fabs(anchors[l]);
                if (std::fabs(anchors[l]) < 1e-6 && u != 0.0) sigma = 1e-3;
                cut.slope[t][l] = sigma * u;
            }
        }
        out.pool.aggregate_cuts.push_back(std::move(cut));
        rec.cuts_added = 1;
        rec.t_total_ms = ms_since(t_start);
        out.log.iterations.push_back(rec);
    }
    out.wall_seconds = ms_since(t_start) / 1e3;
    return out;
}

}  // namespace iegs
