#include <chrono>
#include <cmath>

#include "iegs/baselines.hpp"

namespace iegs {

namespace {
using Clock = std::chrono::steady_clock;
}

PwlResult run_pwl(const DispatchCase& c, int weymouth_segments, const SolveOptions& opt) {
    if (weymouth_segments < 2)
        throw std::invalid_argument("run_pwl: need at least 2 segments");
    PwlResult out;
    const auto t_start = Clock::now();
    const GasSystem& gs = c.gas;
    const int T = c.n_periods;

    OaPool oa;
    oa.init(c);
    CutPool no_cuts;
    MasterConfig cfg = opt.master;
    MasterModel model = build_master(c, no_cuts, oa, cfg);
    LinearProgram& lp = model.mip.lp;
    const MasterLayout& L = model.layout;

    // squared pressures
    std::vector<std::vector<int>> pi_col(T, std::vector<int>(gs.nodes.size()));
    for (int t = 0; t < T; ++t)
        for (size_t n = 0; n < gs.nodes.size(); ++n)
            pi_col[t][n] = lp.add_col(0.0, gs.nodes[n].pi_min, gs.nodes[n].pi_max);

    // compression-ratio limits
    for (int t = 0; t < T; ++t)
        for (const auto& cm : gs.compressors) {
            int r1 = lp.add_row(RowSense::GE, 0.0);
            lp.add_term(r1, pi_col[t][cm.to], 1.0);
            lp.add_term(r1, pi_col[t][cm.from], -cm.r_min);
            int r2 = lp.add_row(RowSense::LE, 0.0);
            lp.add_term(r2, pi_col[t][cm.to], 1.0);
            lp.add_term(r2, pi_col[t][cm.from], -cm.r_max);
        }

    // linearized Weymouth equality per pipeline and period over the
    // physically attainable flow range
    for (int t = 0; t < T; ++t) {
        for (size_t l = 0; l < gs.pipelines.size(); ++l) {
            const auto& pl = gs.pipelines[l];
            double spread_fwd = gs.nodes[pl.from].pi_max - gs.nodes[pl.to].pi_min;
            double spread_rev = gs.nodes[pl.to].pi_max - gs.nodes[pl.from].pi_min;
            double spread = std::max({spread_fwd, spread_rev, 0.0});
            double cap = std::sqrt(pl.k * std::max(spread, 1e-9));
            std::vector<double> xs, fs;
            for (int s = 0; s <= weymouth_segments; ++s) {
                double x = -cap + 2.0 * cap * s / weymouth_segments;
                if (s * 2 == weymouth_segments) x = 0.0;  // exact midpoint
                xs.push_back(x);
                fs.push_back(x * std::fabs(x));
            }
            int theta = lp.add_col(0.0, -kInf, kInf);
            encode_pwl(model.mip, L.g_pipe(t, static_cast<int>(l)), theta, xs, fs);
            int r = lp.add_row(RowSense::EQ, 0.0);
            lp.add_term(r, theta, 1.0);
            lp.add_term(r, pi_col[t][pl.from], -pl.k);
            lp.add_term(r, pi_col[t][pl.to], pl.k);
        }
    }

    model.row_names.resize(lp.n_rows());

    MasterResult mres = solve_master(model, c, oa, cfg);
    out.wall_seconds =
        std::chrono::duration<double>(Clock::now() - t_start).count();
    out.stats.n_binaries = static_cast<int>(model.mip.binaries.size());
    out.stats.n_continuous = lp.n_cols - out.stats.n_binaries;

    switch (mres.status) {
        case MasterStatus::Infeasible:
            out.status = RunStatus::MasterInfeasible;
            return out;
        case MasterStatus::NumFail:
            out.status = RunStatus::NumFail;
            return out;
        case MasterStatus::Optimal:
            break;
    }
    out.status = RunStatus::Converged;
    out.schedule = mres.schedule;
    out.pressures.assign(T, std::vector<double>(gs.nodes.size(), 0.0));
    for (int t = 0; t < T; ++t)
        for (size_t n = 0; n < gs.nodes.size(); ++n)
            out.pressures[t][n] = mres.raw_x[pi_col[t][n]];
    return out;
}

}  // namespace iegs
