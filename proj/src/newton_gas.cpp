#include <algorithm>
#include <cmath>
#include <vector>

#include "iegs/baselines.hpp"

namespace iegs {

namespace {

// The merit function is a penalized least-squares form of the gas-side
// equations with flows and coupling demands fixed:
//   1/2 sum slack^2
// + 1/2 w_eq  sum (linear equality residuals)^2      (definitions, balances)
// + 1/2 w_bnd sum (bound / ratio violations)^2
// It is piecewise quadratic; each Newton step solves the active-set normal
// equations with Levenberg regularization on demand.

struct Model {
    const DispatchCase* c;
    const Schedule* s;
    NewtonConfig cfg;
    BdSubproblemState layout;

    int nvars() const { return layout.size(); }

    // linear equalities  A x = b  (built once, dense rows of sparse terms)
    struct Row {
        std::vector<std::pair<int, double>> terms;
        double rhs;
        double weight;
    };
    std::vector<Row> equalities;

    // simple bounds per variable (may be +-inf)
    std::vector<double> lo, hi;
    // compression-ratio rows  r_min pi_in - pi_out <= 0,  pi_out - r_max pi_in <= 0
    std::vector<Row> ineqs;  // terms . x - rhs <= 0, penalized when positive
};

Model build_model(const DispatchCase& c, const Schedule& s, const NewtonConfig& cfg) {
    Model m;
    m.c = &c;
    m.s = &s;
    m.cfg = cfg;
    const GasSystem& gs = c.gas;
    const int T = c.n_periods;
    const int n_n = static_cast<int>(gs.nodes.size());
    const int n_i = static_cast<int>(gs.pipelines.size());
    const int n_c = static_cast<int>(gs.compressors.size());
    const int n_r = static_cast<int>(gs.storages.size());
    const int n_s = static_cast<int>(gs.wells.size());

    BdSubproblemState& L = m.layout;
    L.n_periods = T;
    int o = 0;
    L.off_pi = o; o += n_n;
    L.off_slack = o; o += n_i;
    L.off_comp = o; o += n_c;
    L.off_comp_fuel = o; o += n_c;
    L.off_sto = o; o += n_r;
    L.off_level = o; o += n_r;
    L.off_well = o; o += n_s;
    L.vars_per_period = o;
    L.x.assign(L.size(), 0.0);

    m.lo.assign(L.size(), -kInf);
    m.hi.assign(L.size(), kInf);
    for (int t = 0; t < T; ++t) {
        for (int n = 0; n < n_n; ++n) {
            m.lo[L.idx(t, L.off_pi, n)] = gs.nodes[n].pi_min;
            m.hi[L.idx(t, L.off_pi, n)] = gs.nodes[n].pi_max;
        }
        for (int mi = 0; mi < n_c; ++mi) {
            m.lo[L.idx(t, L.off_comp, mi)] = 0.0;
            m.lo[L.idx(t, L.off_comp_fuel, mi)] = 0.0;
        }
        for (int z = 0; z < n_r; ++z) {
            m.lo[L.idx(t, L.off_sto, z)] = -gs.storages[z].g_out;
            m.hi[L.idx(t, L.off_sto, z)] = gs.storages[z].g_in;
            m.lo[L.idx(t, L.off_level, z)] = gs.storages[z].s_min;
            m.hi[L.idx(t, L.off_level, z)] = gs.storages[z].s_max;
        }
        for (int sw = 0; sw < n_s; ++sw) {
            m.lo[L.idx(t, L.off_well, sw)] = gs.wells[sw].g_min;
            m.hi[L.idx(t, L.off_well, sw)] = gs.wells[sw].g_max;
        }
    }

    const double weq = cfg.equality_penalty;
    for (int t = 0; t < T; ++t) {
        // Weymouth definition rows: k pi_i - k pi_j + slack_l = G|G|, weight 1
        // on the slack itself via objective; here the defining equality gets
        // the hard weight
        for (int l = 0; l < n_i; ++l) {
            const auto& pl = gs.pipelines[l];
            double g = s.g_pipe[t][l];
            Model::Row r;
            r.terms = {{L.idx(t, L.off_pi, pl.from), pl.k},
                       {L.idx(t, L.off_pi, pl.to), -pl.k},
                       {L.idx(t, L.off_slack, l), 1.0}};
            r.rhs = g * std::fabs(g);
            r.weight = weq;
            m.equalities.push_back(std::move(r));
        }
        // compressor fuel definition
        for (int mi = 0; mi < n_c; ++mi) {
            Model::Row r;
            r.terms = {{L.idx(t, L.off_comp_fuel, mi), 1.0},
                       {L.idx(t, L.off_comp, mi), -gs.compressors[mi].alpha}};
            r.rhs = 0.0;
            r.weight = weq;
            m.equalities.push_back(std::move(r));
        }
        // storage dynamics + cyclic closure
        for (int z = 0; z < n_r; ++z) {
            Model::Row r;
            r.terms = {{L.idx(t, L.off_level, z), 1.0}, {L.idx(t, L.off_sto, z), -1.0}};
            if (t > 0) r.terms.push_back({L.idx(t - 1, L.off_level, z), -1.0});
            r.rhs = t == 0 ? gs.storages[z].s0 : 0.0;
            r.weight = weq;
            m.equalities.push_back(std::move(r));
            if (t == T - 1) {
                Model::Row rc;
                rc.terms = {{L.idx(t, L.off_level, z), 1.0}};
                rc.rhs = gs.storages[z].s0;
                rc.weight = weq;
                m.equalities.push_back(std::move(rc));
            }
        }
        // nodal balance with fixed flows / coupling demands
        for (int n = 0; n < n_n; ++n) {
            Model::Row r;
            r.weight = weq;
            double rhs = 0.0;
            for (const auto& d : gs.gas_loads)
                if (d.node == n) rhs += d.profile[t];
            for (size_t j = 0; j < c.power.gas_units.size(); ++j)
                if (c.power.gas_units[j].gas_node == n) rhs += s.g_gas[t][j];
            for (size_t k = 0; k < c.power.p2g_units.size(); ++k)
                if (c.power.p2g_units[k].gas_node == n)
                    rhs -= c.power.p2g_units[k].eta * s.p_p2g[t][k];
            for (int l = 0; l < n_i; ++l) {
                if (gs.pipelines[l].from == n) rhs += s.g_pipe[t][l];
                if (gs.pipelines[l].to == n) rhs -= s.g_pipe[t][l];
            }
            for (int sw = 0; sw < n_s; ++sw)
                if (gs.wells[sw].node == n) r.terms.push_back({L.idx(t, L.off_well, sw), 1.0});
            for (int mi = 0; mi < n_c; ++mi) {
                if (gs.compressors[mi].from == n) {
                    r.terms.push_back({L.idx(t, L.off_comp, mi), -1.0});
                    r.terms.push_back({L.idx(t, L.off_comp_fuel, mi), -1.0});
                }
                if (gs.compressors[mi].to == n)
                    r.terms.push_back({L.idx(t, L.off_comp, mi), 1.0});
            }
            for (int z = 0; z < n_r; ++z)
                if (gs.storages[z].node == n) r.terms.push_back({L.idx(t, L.off_sto, z), -1.0});
            r.rhs = rhs;
            if (!r.terms.empty()) m.equalities.push_back(std::move(r));
        }
        // compression-ratio inequalities
        for (int mi = 0; mi < n_c; ++mi) {
            const auto& cm = gs.compressors[mi];
            Model::Row r1;
            r1.terms = {{L.idx(t, L.off_pi, cm.from), cm.r_min},
                        {L.idx(t, L.off_pi, cm.to), -1.0}};
            r1.rhs = 0.0;
            r1.weight = cfg.bound_penalty;
            m.ineqs.push_back(std::move(r1));
            Model::Row r2;
            r2.terms = {{L.idx(t, L.off_pi, cm.to), 1.0},
                        {L.idx(t, L.off_pi, cm.from), -cm.r_max}};
            r2.rhs = 0.0;
            r2.weight = cfg.bound_penalty;
            m.ineqs.push_back(std::move(r2));
        }
    }
    return m;
}

double merit(const Model& m, const std::vector<double>& x) {
    double f = 0.0;
    const auto& L = m.layout;
    for (int t = 0; t < L.n_periods; ++t)
        for (int l = 0; l < static_cast<int>(m.c->gas.pipelines.size()); ++l) {
            double w = x[L.idx(t, L.off_slack, l)];
            f += 0.5 * w * w;
        }
    for (const auto& r : m.equalities) {
        double v = -r.rhs;
        for (auto [j, a] : r.terms) v += a * x[j];
        f += 0.5 * r.weight * v * v;
    }
    for (const auto& r : m.ineqs) {
        double v = -r.rhs;
        for (auto [j, a] : r.terms) v += a * x[j];
        if (v > 0) f += 0.5 * r.weight * v * v;
    }
    const double wb = m.cfg.bound_penalty;
    for (int j = 0; j < m.layout.size(); ++j) {
        if (x[j] < m.lo[j]) f += 0.5 * wb * (m.lo[j] - x[j]) * (m.lo[j] - x[j]);
        if (x[j] > m.hi[j]) f += 0.5 * wb * (x[j] - m.hi[j]) * (x[j] - m.hi[j]);
    }
    return f;
}

void grad_hess(const Model& m, const std::vector<double>& x, std::vector<double>& g,
               std::vector<std::vector<double>>& H) {
    const int n = m.layout.size();
    g.assign(n, 0.0);
    H.assign(n, std::vector<double>(n, 0.0));
    const auto& L = m.layout;
    for (int t = 0; t < L.n_periods; ++t)
        for (int l = 0; l < static_cast<int>(m.c->gas.pipelines.size()); ++l) {
            int j = L.idx(t, L.off_slack, l);
            g[j] += x[j];
            H[j][j] += 1.0;
        }
    auto add_row = [&](const Model::Row& r, bool active) {
        if (!active) return;
        double v = -r.rhs;
        for (auto [j, a] : r.terms) v += a * x[j];
        for (auto [j, a] : r.terms) {
            g[j] += r.weight * v * a;
            for (auto [j2, a2] : r.terms) H[j][j2] += r.weight * a * a2;
        }
    };
    for (const auto& r : m.equalities) add_row(r, true);
    for (const auto& r : m.ineqs) {
        double v = -r.rhs;
        for (auto [j, a] : r.terms) v += a * x[j];
        add_row(r, v > 0);
    }
    const double wb = m.cfg.bound_penalty;
    for (int j = 0; j < n; ++j) {
        if (x[j] < m.lo[j]) {
            g[j] += wb * (x[j] - m.lo[j]);
            H[j][j] += wb;
        }
        if (x[j] > m.hi[j]) {
            g[j] += wb * (x[j] - m.hi[j]);
            H[j][j] += wb;
        }
    }
}

// dense Cholesky-flavored solve with Levenberg bump on failure
bool solve_spd(std::vector<std::vector<double>> A, std::vector<double> b,
               std::vector<double>& out, double lambda) {
    const int n = static_cast<int>(b.size());
    for (int i = 0; i < n; ++i) A[i][i] += lambda;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
        if (std::fabs(A[piv][k]) < 1e-12) return false;
        std::swap(A[piv], A[k]);
        std::swap(b[piv], b[k]);
        for (int i = k + 1; i < n; ++i) {
            double f = A[i][k] / A[k][k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    out.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * out[j];
        out[i] = s / A[i][i];
    }
    return true;
}

}  // namespace

BdSubproblemState make_bd_state(const DispatchCase& c, const Schedule& s, bool flat_start) {
    NewtonConfig cfg;
    Model m = build_model(c, s, cfg);
    BdSubproblemState st = m.layout;
    const GasSystem& gs = c.gas;
    for (int t = 0; t < st.n_periods; ++t) {
        for (size_t n = 0; n < gs.nodes.size(); ++n)
            st.x[st.idx(t, st.off_pi, static_cast<int>(n))] =
                0.5 * (gs.nodes[n].pi_min + gs.nodes[n].pi_max);
        for (size_t mi = 0; mi < gs.compressors.size(); ++mi) {
            st.x[st.idx(t, st.off_comp, static_cast<int>(mi))] = s.g_comp[t][mi];
            st.x[st.idx(t, st.off_comp_fuel, static_cast<int>(mi))] = s.g_comp_fuel[t][mi];
        }
        for (size_t z = 0; z < gs.storages.size(); ++z) {
            st.x[st.idx(t, st.off_sto, static_cast<int>(z))] = s.g_sto[t][z];
            st.x[st.idx(t, st.off_level, static_cast<int>(z))] = s.s_level[t][z];
        }
        for (size_t sw = 0; sw < gs.wells.size(); ++sw)
            st.x[st.idx(t, st.off_well, static_cast<int>(sw))] = s.g_well[t][sw];
        for (size_t l = 0; l < gs.pipelines.size(); ++l) {
            const auto& pl = gs.pipelines[l];
            double g = s.g_pipe[t][l];
            double guess = flat_start
                               ? 0.0
                               : g * std::fabs(g) -
                                     pl.k * (st.x[st.idx(t, st.off_pi, pl.from)] -
                                             st.x[st.idx(t, st.off_pi, pl.to)]);
            st.x[st.idx(t, st.off_slack, static_cast<int>(l))] = flat_start ? 0.0 : guess;
        }
    }
    return st;
}

NewtonResult newton_gas(const DispatchCase& c, const Schedule& s, BdSubproblemState init,
                        const NewtonConfig& cfg) {
    Model m = build_model(c, s, cfg);
    NewtonResult out;
    std::vector<double> x = init.x;
    if (static_cast<int>(x.size()) != m.layout.size()) x.assign(m.layout.size(), 0.0);

    std::vector<double> g;
    std::vector<std::vector<double>> H;
    double f = merit(m, x);
    bool tried_flat = false;
    double scale = 1.0;
    for (const auto& r : m.equalities) scale = std::max(scale, std::fabs(r.rhs));
    const double grad_scale = cfg.equality_penalty * scale;

    for (int it = 0; it < cfg.max_nr_iter; ++it) {
        out.iterations = it;
        grad_hess(m, x, g, H);
        double gn = 0.0;
        for (double v : g) gn = std::max(gn, std::fabs(v));
        out.grad_norm = gn / grad_scale;
        // stop two orders below the certificate so an early plateau of the
        // loosely-scaled gradient cannot masquerade as stationarity
        if (out.grad_norm <= 0.01 * cfg.grad_tol) {
            out.converged = true;
            break;
        }
        std::vector<double> step;
        double lambda = 0.0;
        bool solved = solve_spd(H, g, step, lambda);
        while (!solved && lambda < 1e8) {
            lambda = lambda == 0.0 ? 1e-6 : lambda * 100;
            solved = solve_spd(H, g, step, lambda);
        }
        if (!solved) {
            if (!tried_flat) {
                tried_flat = true;
                BdSubproblemState flat = make_bd_state(c, s, true);
                x = flat.x;
                f = merit(m, x);
                continue;
            }
            out.converged = false;
            break;
        }
        // the merit is piecewise quadratic: a vanishing full step at a point
        // where the quadratic model is exact certifies stationarity
        double stepinf = 0.0, xinf = 1.0;
        for (int j = 0; j < m.layout.size(); ++j) {
            stepinf = std::max(stepinf, std::fabs(step[j]));
            xinf = std::max(xinf, std::fabs(x[j]));
        }
        // damped line search: halve on merit increase
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h <= cfg.max_halvings; ++h) {
            std::vector<double> trial = x;
            for (int j = 0; j < m.layout.size(); ++j) trial[j] -= alpha * step[j];
            double ft = merit(m, trial);
            if (ft <= f + 1e-12) {
                x = std::move(trial);
                f = ft;
                accepted = true;
                break;
            }
            alpha *= cfg.damping;
        }
        if (!accepted) {
            if (!tried_flat) {
                tried_flat = true;
                BdSubproblemState flat = make_bd_state(c, s, true);
                x = flat.x;
                f = merit(m, x);
                continue;
            }
            out.converged = false;
            break;
        }
        if (stepinf <= 1e-11 * xinf) {
            grad_hess(m, x, g, H);
            gn = 0.0;
            for (double v : g) gn = std::max(gn, std::fabs(v));
            out.grad_norm = gn / grad_scale;
            out.converged = out.grad_norm <= cfg.grad_tol;
            out.iterations = it + 1;
            break;
        }
    }

    out.state = m.layout;
    out.state.x = x;
    const int T = c.n_periods;
    const int n_i = static_cast<int>(c.gas.pipelines.size());
    out.weymouth_residual.assign(T, std::vector<double>(n_i, 0.0));
    out.period_mismatch.assign(T, 0.0);
    for (int t = 0; t < T; ++t)
        for (int l = 0; l < n_i; ++l) {
            double w = x[m.layout.idx(t, m.layout.off_slack, l)];
            out.weymouth_residual[t][l] = w;
            out.period_mismatch[t] += std::fabs(w);
        }
    return out;
}

}  // namespace iegs
