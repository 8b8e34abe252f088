#include "iegs/master.hpp"

#include <algorithm>
#include <cmath>

namespace iegs {

namespace {

double coal_cost_at(const CoalUnit& u, double p) { return u.a * p * p + u.b * p + u.c; }
double gas_burn_at(const GasUnit& u, double p) { return u.a * p * p + u.b * p + u.c; }

double coal_cost_floor(const CoalUnit& u) {
    double lo = coal_cost_at(u, u.p_min), hi = coal_cost_at(u, u.p_max);
    double best = std::min(lo, hi);
    double vertex = -u.b / (2.0 * u.a);
    if (vertex > u.p_min && vertex < u.p_max) best = std::min(best, coal_cost_at(u, vertex));
    return best;
}

}  // namespace

MasterLayout MasterLayout::of(const DispatchCase& c) {
    MasterLayout L;
    L.T = c.n_periods;
    L.n_coal = static_cast<int>(c.power.coal_units.size());
    L.n_gas = static_cast<int>(c.power.gas_units.size());
    L.n_wind = static_cast<int>(c.power.wind_farms.size());
    L.n_p2g = static_cast<int>(c.power.p2g_units.size());
    L.n_pipe = static_cast<int>(c.gas.pipelines.size());
    L.n_comp = static_cast<int>(c.gas.compressors.size());
    L.n_well = static_cast<int>(c.gas.wells.size());
    L.n_sto = static_cast<int>(c.gas.storages.size());
    int o = 0;
    L.off_p_coal = o; o += L.n_coal;
    L.off_p_gas = o; o += L.n_gas;
    L.off_p_wind = o; o += L.n_wind;
    L.off_p_p2g = o; o += L.n_p2g;
    L.off_f_coal = o; o += L.n_coal;
    L.off_f_wind = o; o += L.n_wind;
    L.off_g_gas = o; o += L.n_gas;
    L.off_g_pipe = o; o += L.n_pipe;
    L.off_g_comp = o; o += L.n_comp;
    L.off_g_comp_fuel = o; o += L.n_comp;
    L.off_g_well = o; o += L.n_well;
    L.off_g_sto = o; o += L.n_sto;
    L.off_s_level = o; o += L.n_sto;
    L.off_g_p2g = o; o += L.n_p2g;
    L.block = o;
    return L;
}

void OaPool::init(const DispatchCase& c) {
    points.assign(c.power.coal_units.size(), {});
    for (size_t i = 0; i < c.power.coal_units.size(); ++i) {
        const auto& u = c.power.coal_units[i];
        std::vector<double> seed;
        const int n_seed = 9;
        for (int k = 0; k < n_seed; ++k)
            seed.push_back(u.p_min + (u.p_max - u.p_min) * k / (n_seed - 1.0));
        points[i].assign(c.n_periods, seed);
    }
}

MasterModel build_master(const DispatchCase& c, const CutPool& pool, const OaPool& oa,
                         const MasterConfig& cfg) {
    MasterModel M;
    M.layout = MasterLayout::of(c);
    const MasterLayout& L = M.layout;
    const PowerSystem& pw = c.power;
    const GasSystem& gs = c.gas;
    LinearProgram& lp = M.mip.lp;
    const int T = L.T;

    // ---- structural columns, per-period blocks
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < L.n_coal; ++i)
            lp.add_col(0.0, pw.coal_units[i].p_min, pw.coal_units[i].p_max);
        for (int j = 0; j < L.n_gas; ++j)
            lp.add_col(0.0, pw.gas_units[j].p_min, pw.gas_units[j].p_max);
        for (int n = 0; n < L.n_wind; ++n)
            lp.add_col(0.0, 0.0, pw.wind_farms[n].profile[t]);
        for (int k = 0; k < L.n_p2g; ++k)
            lp.add_col(0.0, 0.0, pw.p2g_units[k].p_max);
        for (int i = 0; i < L.n_coal; ++i)
            lp.add_col(1.0, coal_cost_floor(pw.coal_units[i]), kInf);  // epigraph
        for (int n = 0; n < L.n_wind; ++n)
            lp.add_col(1.0, 0.0, kInf);  // curtailment cost
        for (int j = 0; j < L.n_gas; ++j)
            lp.add_col(0.0, 0.0, kInf);  // gas burned
        for (int l = 0; l < L.n_pipe; ++l)
            lp.add_col(0.0, -kInf, kInf);
        for (int m = 0; m < L.n_comp; ++m)
            lp.add_col(0.0, 0.0, kInf);  // compressor throughput
        for (int m = 0; m < L.n_comp; ++m)
            lp.add_col(0.0, 0.0, kInf);  // compressor fuel
        for (int s = 0; s < L.n_well; ++s)
            lp.add_col(gs.wells[s].cost, gs.wells[s].g_min, gs.wells[s].g_max);
        for (int z = 0; z < L.n_sto; ++z)
            lp.add_col(0.0, -gs.storages[z].g_out, gs.storages[z].g_in);
        for (int z = 0; z < L.n_sto; ++z) {
            // cyclic closure pins the final level back to the initial one
            double lb = gs.storages[z].s_min, ub = gs.storages[z].s_max;
            if (t == T - 1) lb = ub = gs.storages[z].s0;
            lp.add_col(0.0, lb, ub);
        }
        for (int k = 0; k < L.n_p2g; ++k)
            lp.add_col(0.0, 0.0, kInf);  // p2g gas output
    }

    auto name_row = [&](int r, std::string n) {
        M.row_names.resize(r + 1);
        M.row_names[r] = std::move(n);
    };

    Ptdf f = effective_ptdf(pw);

    // ---- per-period structural rows
    for (int t = 0; t < T; ++t) {
        const std::string ts = "t" + std::to_string(t);
        // transmission limits via distribution factors, both directions
        for (size_t li = 0; li < pw.lines.size(); ++li) {
            for (int dir = 0; dir < 2; ++dir) {
                double cap = pw.lines[li].capacity;
                int r = lp.add_row(dir ? RowSense::GE : RowSense::LE, dir ? -cap : cap);
                name_row(r, ts + (dir ? ":line_lo" : ":line_hi") + std::to_string(li));
                int col = 0;
                for (int i = 0; i < L.n_coal; ++i)
                    lp.add_term(r, L.p_coal(t, i), f.h_g[li][col]), col++;
                for (int j = 0; j < L.n_gas; ++j)
                    lp.add_term(r, L.p_gas(t, j), f.h_g[li][col]), col++;
                for (int n = 0; n < L.n_wind; ++n)
                    lp.add_term(r, L.p_wind(t, n), f.h_g[li][col]), col++;
                int dcol = 0;
                double fixed = 0.0;
                for (const auto& d : pw.loads)
                    fixed += f.h_d[li][dcol] * d.profile[t], dcol++;
                for (int k = 0; k < L.n_p2g; ++k)
                    lp.add_term(r, L.p_p2g(t, k), -f.h_d[li][dcol]), dcol++;
                lp.rhs[r] += fixed;
            }
        }
        // system power balance
        {
            double dem = 0.0;
            for (const auto& d : pw.loads) dem += d.profile[t];
            int r = lp.add_row(RowSense::EQ, dem);
            name_row(r, ts + ":power_balance");
            for (int i = 0; i < L.n_coal; ++i) lp.add_term(r, L.p_coal(t, i), 1.0);
            for (int j = 0; j < L.n_gas; ++j) lp.add_term(r, L.p_gas(t, j), 1.0);
            for (int n = 0; n < L.n_wind; ++n) lp.add_term(r, L.p_wind(t, n), 1.0);
            for (int k = 0; k < L.n_p2g; ++k) lp.add_term(r, L.p_p2g(t, k), -1.0);
        }
        // ramping, first period against the initial outputs
        auto ramp_rows = [&](int col_now, int col_prev, double p0, double dw, double up,
                             const std::string& tag) {
            int r1 = lp.add_row(RowSense::LE, up + (col_prev < 0 ? p0 : 0.0));
            lp.add_term(r1, col_now, 1.0);
            if (col_prev >= 0) lp.add_term(r1, col_prev, -1.0);
            name_row(r1, ts + ":ramp_up:" + tag);
            int r2 = lp.add_row(RowSense::GE, dw + (col_prev < 0 ? p0 : 0.0));
            lp.add_term(r2, col_now, 1.0);
            if (col_prev >= 0) lp.add_term(r2, col_prev, -1.0);
            name_row(r2, ts + ":ramp_dw:" + tag);
        };
        for (int i = 0; i < L.n_coal; ++i) {
            const auto& u = pw.coal_units[i];
            ramp_rows(L.p_coal(t, i), t ? L.p_coal(t - 1, i) : -1, u.p0, u.ramp_dw, u.ramp_up,
                      "coal" + std::to_string(i));
        }
        for (int j = 0; j < L.n_gas; ++j) {
            const auto& u = pw.gas_units[j];
            ramp_rows(L.p_gas(t, j), t ? L.p_gas(t - 1, j) : -1, u.p0, u.ramp_dw, u.ramp_up,
                      "gas" + std::to_string(j));
        }
        // curtailment cost definition
        for (int n = 0; n < L.n_wind; ++n) {
            int r = lp.add_row(RowSense::EQ, c.rho * pw.wind_farms[n].profile[t]);
            lp.add_term(r, L.f_wind(t, n), 1.0);
            lp.add_term(r, L.p_wind(t, n), c.rho);
            name_row(r, ts + ":curtail" + std::to_string(n));
        }
        // compressor fuel proportional to throughput
        for (int m = 0; m < L.n_comp; ++m) {
            int r = lp.add_row(RowSense::EQ, 0.0);
            lp.add_term(r, L.g_comp_fuel(t, m), 1.0);
            lp.add_term(r, L.g_comp(t, m), -gs.compressors[m].alpha);
            name_row(r, ts + ":comp_fuel" + std::to_string(m));
        }
        // storage dynamics
        for (int z = 0; z < L.n_sto; ++z) {
            int r = lp.add_row(RowSense::EQ, t == 0 ? gs.storages[z].s0 : 0.0);
            lp.add_term(r, L.s_level(t, z), 1.0);
            lp.add_term(r, L.g_sto(t, z), -1.0);
            if (t > 0) lp.add_term(r, L.s_level(t - 1, z), -1.0);
            name_row(r, ts + ":storage" + std::to_string(z));
        }
        // p2g conversion
        for (int k = 0; k < L.n_p2g; ++k) {
            int r = lp.add_row(RowSense::EQ, 0.0);
            lp.add_term(r, L.g_p2g(t, k), 1.0);
            lp.add_term(r, L.p_p2g(t, k), -pw.p2g_units[k].eta);
            name_row(r, ts + ":p2g" + std::to_string(k));
        }
        // nodal gas balance
        for (size_t n = 0; n < gs.nodes.size(); ++n) {
            double rhs = 0.0;
            for (const auto& d : gs.gas_loads)
                if (d.node == static_cast<int>(n)) rhs += d.profile[t];
            int r = lp.add_row(RowSense::EQ, rhs);
            name_row(r, ts + ":gas_node" + std::to_string(n));
            for (int s = 0; s < L.n_well; ++s)
                if (gs.wells[s].node == static_cast<int>(n)) lp.add_term(r, L.g_well(t, s), 1.0);
            for (int k = 0; k < L.n_p2g; ++k)
                if (pw.p2g_units[k].gas_node == static_cast<int>(n))
                    lp.add_term(r, L.g_p2g(t, k), 1.0);
            for (int m = 0; m < L.n_comp; ++m) {
                if (gs.compressors[m].from == static_cast<int>(n)) {
                    lp.add_term(r, L.g_comp(t, m), -1.0);
                    lp.add_term(r, L.g_comp_fuel(t, m), -1.0);
                }
                if (gs.compressors[m].to == static_cast<int>(n))
                    lp.add_term(r, L.g_comp(t, m), 1.0);
            }
            for (int l = 0; l < L.n_pipe; ++l) {
                if (gs.pipelines[l].from == static_cast<int>(n)) lp.add_term(r, L.g_pipe(t, l), -1.0);
                if (gs.pipelines[l].to == static_cast<int>(n)) lp.add_term(r, L.g_pipe(t, l), 1.0);
            }
            for (int z = 0; z < L.n_sto; ++z)
                if (gs.storages[z].node == static_cast<int>(n)) lp.add_term(r, L.g_sto(t, z), -1.0);
            for (int j = 0; j < L.n_gas; ++j)
                if (pw.gas_units[j].gas_node == static_cast<int>(n))
                    lp.add_term(r, L.g_gas(t, j), -1.0);
        }
        // gas-unit consumption curves, incremental linearization
        for (int j = 0; j < L.n_gas; ++j) {
            const auto& u = pw.gas_units[j];
            if (u.p_max - u.p_min < 1e-9) {
                int r = lp.add_row(RowSense::EQ, gas_burn_at(u, u.p_min));
                lp.add_term(r, L.g_gas(t, j), 1.0);
                name_row(r, ts + ":burn_fixed" + std::to_string(j));
                continue;
            }
            std::vector<double> xs, fs;
            const int K = std::max(2, cfg.eq7_segments);
            for (int s = 0; s <= K; ++s) {
                double x = u.p_min + (u.p_max - u.p_min) * s / K;
                xs.push_back(x);
                fs.push_back(gas_burn_at(u, x));
            }
            int before = lp.n_rows();
            encode_pwl(M.mip, L.p_gas(t, j), L.g_gas(t, j), xs, fs);
            for (int r = before; r < lp.n_rows(); ++r)
                name_row(r, ts + ":burn_pwl" + std::to_string(j));
        }
    }
    M.n_structural_rows = lp.n_rows();

    // ---- outer-approximation section (append-only across rebuilds)
    for (size_t i = 0; i < oa.points.size(); ++i) {
        for (int t = 0; t < T; ++t) {
            for (double pb : oa.points[i][t]) {
                const auto& u = pw.coal_units[i];
                OaCut cut = oa_refine(u.a, u.b, u.c, pb);
                int r = lp.add_row(RowSense::GE, cut.offset);
                lp.add_term(r, L.f_coal(t, static_cast<int>(i)), 1.0);
                lp.add_term(r, L.p_coal(t, static_cast<int>(i)), -cut.slope);
                name_row(r, "oa:coal" + std::to_string(i) + ":t" + std::to_string(t));
                M.oa_rows.push_back({static_cast<int>(i), t, pb});
            }
        }
    }

    // ---- accumulated feasibility cuts
    for (const auto& cut : pool.period_cuts) {
        double rhs = -cut.g;
        int r = lp.add_row(RowSense::LE, 0.0);
        for (int l = 0; l < L.n_pipe; ++l) {
            lp.add_term(r, L.g_pipe(cut.t, l), cut.slope[l]);
            rhs += cut.slope[l] * cut.anchor[l];
        }
        lp.rhs[r] = rhs;
        name_row(r, "cut:t" + std::to_string(cut.t) + ":it" + std::to_string(cut.iteration));
    }
    for (const auto& cut : pool.aggregate_cuts) {
        double rhs = -cut.g_total;
        int r = lp.add_row(RowSense::LE, 0.0);
        for (int t = 0; t < T; ++t)
            for (int l = 0; l < L.n_pipe; ++l) {
                lp.add_term(r, L.g_pipe(t, l), cut.slope[t][l]);
                rhs += cut.slope[t][l] * cut.anchor[t][l];
            }
        lp.rhs[r] = rhs;
        name_row(r, "cut:agg:it" + std::to_string(cut.iteration));
    }
    return M;
}

namespace {

Schedule extract_schedule(const DispatchCase& c, const MasterLayout& L,
                          const std::vector<double>& x, double obj) {
    Schedule s;
    s.objective = obj;
    auto grab = [&](int off, int n) {
        std::vector<std::vector<double>> out(L.T, std::vector<double>(n, 0.0));
        for (int t = 0; t < L.T; ++t)
            for (int i = 0; i < n; ++i) out[t][i] = x[L.at(t, off, i)];
        return out;
    };
    s.p_coal = grab(L.off_p_coal, L.n_coal);
    s.p_gas = grab(L.off_p_gas, L.n_gas);
    s.p_wind = grab(L.off_p_wind, L.n_wind);
    s.p_p2g = grab(L.off_p_p2g, L.n_p2g);
    s.f_coal = grab(L.off_f_coal, L.n_coal);
    s.f_wind = grab(L.off_f_wind, L.n_wind);
    s.g_gas = grab(L.off_g_gas, L.n_gas);
    s.g_pipe = grab(L.off_g_pipe, L.n_pipe);
    s.g_comp = grab(L.off_g_comp, L.n_comp);
    s.g_comp_fuel = grab(L.off_g_comp_fuel, L.n_comp);
    s.g_well = grab(L.off_g_well, L.n_well);
    s.g_sto = grab(L.off_g_sto, L.n_sto);
    s.s_level = grab(L.off_s_level, L.n_sto);
    s.g_p2g = grab(L.off_g_p2g, L.n_p2g);
    for (int t = 0; t < L.T; ++t) {
        for (int i = 0; i < L.n_coal; ++i) s.coal_cost += s.f_coal[t][i];
        for (int sidx = 0; sidx < L.n_well; ++sidx)
            s.gas_cost += c.gas.wells[sidx].cost * s.g_well[t][sidx];
        for (int n = 0; n < L.n_wind; ++n) s.curtailment_cost += s.f_wind[t][n];
    }
    return s;
}

std::vector<int> deletion_filter(const LinearProgram& lp, const SimplexOptions& sopt) {
    // best effort: only attempted on small models
    if (lp.n_rows() > 800) return {};
    std::vector<char> keep(lp.n_rows(), 1);
    auto still_infeasible = [&](const std::vector<char>& mask) {
        LinearProgram sub;
        sub.n_cols = lp.n_cols;
        sub.obj = lp.obj;
        sub.col_lb = lp.col_lb;
        sub.col_ub = lp.col_ub;
        std::vector<int> remap(lp.n_rows(), -1);
        for (int r = 0; r < lp.n_rows(); ++r)
            if (mask[r]) remap[r] = sub.add_row(lp.sense[r], lp.rhs[r]);
        for (const auto& e : lp.elems)
            if (remap[e.row] >= 0) sub.add_term(remap[e.row], e.col, e.val);
        return solve_lp(sub, sopt).status == LpStatus::Infeasible;
    };
    if (!still_infeasible(keep)) return {};
    for (int r = lp.n_rows() - 1; r >= 0; --r) {
        keep[r] = 0;
        if (!still_infeasible(keep)) keep[r] = 1;
    }
    std::vector<int> out;
    for (int r = 0; r < lp.n_rows(); ++r)
        if (keep[r]) out.push_back(r);
    return out;
}

}  // namespace

MasterResult solve_master(MasterModel& model, const DispatchCase& c, OaPool& oa,
                          const MasterConfig& cfg, BasisState* warm) {
    MasterResult out;
    const MasterLayout& L = model.layout;
    LinearProgram& lp = model.mip.lp;
    const auto& units = c.power.coal_units;

    BasisState local;
    BasisState* basis = warm ? warm : &local;

    auto extend_basis = [&](BasisState& b) {
        // rows appended since the basis was recorded enter with their logical
        size_t want = static_cast<size_t>(lp.n_cols) + lp.n_rows();
        while (b.size() < want) b.push_back(kBasic);
    };

    auto violated_tangents = [&](const std::vector<double>& x) {
        std::vector<std::tuple<int, int, double>> add;  // unit, t, p_bar
        for (size_t i = 0; i < units.size(); ++i) {
            for (int t = 0; t < L.T; ++t) {
                double p = x[L.p_coal(t, static_cast<int>(i))];
                double fv = x[L.f_coal(t, static_cast<int>(i))];
                double truth = coal_cost_at(units[i], p);
                if (truth - fv > 1e-6 * (1.0 + std::fabs(fv))) {
                    bool dup = false;
                    for (double q : oa.points[i][t])
                        if (std::fabs(q - p) < 1e-9 * (1.0 + std::fabs(p))) dup = true;
                    if (!dup) add.push_back({static_cast<int>(i), t, p});
                }
            }
        }
        return add;
    };

    auto append_tangents = [&](const std::vector<std::tuple<int, int, double>>& add) {
        for (auto [i, t, pb] : add) {
            const auto& u = units[i];
            OaCut cut = oa_refine(u.a, u.b, u.c, pb);
            int r = lp.add_row(RowSense::GE, cut.offset);
            lp.add_term(r, L.f_coal(t, i), 1.0);
            lp.add_term(r, L.p_coal(t, i), -cut.slope);
            model.oa_rows.push_back({i, t, pb});
            model.row_names.resize(lp.n_rows());
            model.row_names[r] = "oa:coal" + std::to_string(i) + ":t" + std::to_string(t);
            oa.points[i][t].push_back(pb);
        }
    };

    SimplexOptions sopt = cfg.mip.lp;
    for (int pass = 0; pass < 40; ++pass) {
        out.oa_passes = pass + 1;
        // LP-level refinement first: cheap warm re-solves
        for (int inner = 0; inner < 60; ++inner) {
            extend_basis(*basis);
            LpSolution rel = SimplexSolver(sopt).solve(lp, basis);
            if (rel.status == LpStatus::Infeasible) {
                out.status = MasterStatus::Infeasible;
                out.infeasible_rows = deletion_filter(lp, sopt);
                return out;
            }
            if (rel.status != LpStatus::Optimal) {
                out.status = MasterStatus::NumFail;
                return out;
            }
            auto add = violated_tangents(rel.x);
            if (add.empty()) break;
            append_tangents(add);
        }
        // full solve with integrality
        extend_basis(*basis);
        MipResult mres = solve_mip(model.mip, cfg.mip, basis);
        out.mip_nodes += mres.nodes;
        if (mres.sol.status == LpStatus::Infeasible) {
            out.status = MasterStatus::Infeasible;
            out.infeasible_rows = deletion_filter(lp, sopt);
            return out;
        }
        if (mres.sol.status != LpStatus::Optimal) {
            out.status = MasterStatus::NumFail;
            return out;
        }
        auto add = violated_tangents(mres.sol.x);
        if (add.empty()) {
            out.status = MasterStatus::Optimal;
            out.schedule = extract_schedule(c, L, mres.sol.x, mres.sol.obj);
            out.raw_x = std::move(mres.sol.x);
            return out;
        }
        append_tangents(add);
    }
    out.status = MasterStatus::NumFail;
    return out;
}

std::vector<double> extract_flows(const Schedule& s, int t) {
    if (t < 0 || t >= static_cast<int>(s.g_pipe.size()))
        throw std::out_of_range("extract_flows: period " + std::to_string(t) +
                                " outside schedule horizon");
    return s.g_pipe[t];
}

double schedule_residual(const DispatchCase& c, const Schedule& s) {
    CaseWitness w;
    w.p_coal = s.p_coal;
    w.p_gas = s.p_gas;
    w.p_wind = s.p_wind;
    w.p_p2g = s.p_p2g;
    w.g_pipe = s.g_pipe;
    w.g_comp = s.g_comp;
    w.g_well = s.g_well;
    w.g_storage = s.g_sto;
    w.s_level = s.s_level;
    // no pressures at the master level: reuse the shared evaluator minus the
    // pressure-coupled checks by giving each pipeline a consistent fake drop
    const GasSystem& gs = c.gas;
    const int T = c.n_periods;
    double worst = 0.0;
    auto upd = [&](double viol, double scale) {
        worst = std::max(worst, viol / (1.0 + std::fabs(scale)));
    };
    auto bound = [&](double v, double lo, double hi) {
        upd(std::max(0.0, lo - v), lo);
        upd(std::max(0.0, v - hi), hi);
    };
    const PowerSystem& pw = c.power;
    Ptdf f = effective_ptdf(pw);
    for (int t = 0; t < T; ++t) {
        for (size_t i = 0; i < pw.coal_units.size(); ++i)
            bound(s.p_coal[t][i], pw.coal_units[i].p_min, pw.coal_units[i].p_max);
        for (size_t j = 0; j < pw.gas_units.size(); ++j)
            bound(s.p_gas[t][j], pw.gas_units[j].p_min, pw.gas_units[j].p_max);
        for (size_t n = 0; n < pw.wind_farms.size(); ++n)
            bound(s.p_wind[t][n], 0.0, pw.wind_farms[n].profile[t]);
        for (size_t k = 0; k < pw.p2g_units.size(); ++k)
            bound(s.p_p2g[t][k], 0.0, pw.p2g_units[k].p_max);
        for (size_t i = 0; i < pw.coal_units.size(); ++i) {
            double prev = t == 0 ? pw.coal_units[i].p0 : s.p_coal[t - 1][i];
            bound(s.p_coal[t][i] - prev, pw.coal_units[i].ramp_dw, pw.coal_units[i].ramp_up);
        }
        for (size_t j = 0; j < pw.gas_units.size(); ++j) {
            double prev = t == 0 ? pw.gas_units[j].p0 : s.p_gas[t - 1][j];
            bound(s.p_gas[t][j] - prev, pw.gas_units[j].ramp_dw, pw.gas_units[j].ramp_up);
        }
        double gen = 0.0, dem = 0.0;
        for (size_t i = 0; i < pw.coal_units.size(); ++i) gen += s.p_coal[t][i];
        for (size_t j = 0; j < pw.gas_units.size(); ++j) gen += s.p_gas[t][j];
        for (size_t n = 0; n < pw.wind_farms.size(); ++n) gen += s.p_wind[t][n];
        for (const auto& d : pw.loads) dem += d.profile[t];
        for (size_t k = 0; k < pw.p2g_units.size(); ++k) dem += s.p_p2g[t][k];
        upd(std::fabs(gen - dem), dem);
        for (size_t li = 0; li < pw.lines.size(); ++li) {
            double flow = 0.0;
            int col = 0;
            for (size_t i = 0; i < pw.coal_units.size(); ++i) flow += f.h_g[li][col++] * s.p_coal[t][i];
            for (size_t j = 0; j < pw.gas_units.size(); ++j) flow += f.h_g[li][col++] * s.p_gas[t][j];
            for (size_t n = 0; n < pw.wind_farms.size(); ++n) flow += f.h_g[li][col++] * s.p_wind[t][n];
            int dcol = 0;
            for (const auto& d : pw.loads) flow -= f.h_d[li][dcol++] * d.profile[t];
            for (size_t k = 0; k < pw.p2g_units.size(); ++k) flow -= f.h_d[li][dcol++] * s.p_p2g[t][k];
            bound(flow, -pw.lines[li].capacity, pw.lines[li].capacity);
        }
        for (size_t m = 0; m < gs.compressors.size(); ++m) {
            bound(s.g_comp[t][m], 0.0, kInf);
            upd(std::fabs(s.g_comp_fuel[t][m] - gs.compressors[m].alpha * s.g_comp[t][m]),
                s.g_comp[t][m]);
        }
        for (size_t sw = 0; sw < gs.wells.size(); ++sw)
            bound(s.g_well[t][sw], gs.wells[sw].g_min, gs.wells[sw].g_max);
        for (size_t z = 0; z < gs.storages.size(); ++z) {
            const auto& sz = gs.storages[z];
            bound(s.g_sto[t][z], -sz.g_out, sz.g_in);
            bound(s.s_level[t][z], sz.s_min, sz.s_max);
            double prev = t == 0 ? sz.s0 : s.s_level[t - 1][z];
            upd(std::fabs(s.s_level[t][z] - prev - s.g_sto[t][z]), sz.s_max);
        }
        for (size_t k = 0; k < pw.p2g_units.size(); ++k)
            upd(std::fabs(s.g_p2g[t][k] - pw.p2g_units[k].eta * s.p_p2g[t][k]), s.g_p2g[t][k]);
        std::vector<double> net(gs.nodes.size(), 0.0);
        for (size_t sw = 0; sw < gs.wells.size(); ++sw) net[gs.wells[sw].node] += s.g_well[t][sw];
        for (size_t k = 0; k < pw.p2g_units.size(); ++k)
            net[pw.p2g_units[k].gas_node] += s.g_p2g[t][k];
        for (size_t m = 0; m < gs.compressors.size(); ++m) {
            net[gs.compressors[m].from] -= s.g_comp[t][m] + s.g_comp_fuel[t][m];
            net[gs.compressors[m].to] += s.g_comp[t][m];
        }
        for (size_t l = 0; l < gs.pipelines.size(); ++l) {
            net[gs.pipelines[l].from] -= s.g_pipe[t][l];
            net[gs.pipelines[l].to] += s.g_pipe[t][l];
        }
        for (size_t z = 0; z < gs.storages.size(); ++z) net[gs.storages[z].node] -= s.g_sto[t][z];
        for (size_t j = 0; j < pw.gas_units.size(); ++j)
            net[pw.gas_units[j].gas_node] -= s.g_gas[t][j];
        for (const auto& d : gs.gas_loads) net[d.node] -= d.profile[t];
        for (size_t n = 0; n < gs.nodes.size(); ++n) upd(std::fabs(net[n]), 100.0);
    }
    for (size_t z = 0; z < gs.storages.size(); ++z)
        upd(std::fabs(s.s_level[T - 1][z] - gs.storages[z].s0), gs.storages[z].s_max);
    (void)w;
    return worst;
}

double true_cost(const DispatchCase& c, const Schedule& s) {
    double total = 0.0;
    for (int t = 0; t < c.n_periods; ++t) {
        for (size_t i = 0; i < c.power.coal_units.size(); ++i)
            total += coal_cost_at(c.power.coal_units[i], s.p_coal[t][i]);
        for (size_t w = 0; w < c.gas.wells.size(); ++w)
            total += c.gas.wells[w].cost * s.g_well[t][w];
        for (size_t n = 0; n < c.power.wind_farms.size(); ++n)
            total += c.rho * (c.power.wind_farms[n].profile[t] - s.p_wind[t][n]);
    }
    return total;
}

}  // namespace iegs
