#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "iegs/netmodel.hpp"

namespace iegs {

namespace {

// splitmix64: portable deterministic stream, identical on every platform
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next() {
        uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

constexpr int kPeriods = 24;

// smooth daily shapes in [0,1]
double day_curve(int t) {
    double x = (t - 14.0) / 5.0;
    return std::exp(-x * x);
}
double night_curve(int t) {
    double x = (t - 3.0) / 4.5;
    double a = std::exp(-x * x);
    double y = (t - 23.5) / 4.5;
    return std::min(1.0, a + std::exp(-y * y));
}

}  // namespace

DispatchCase generate_case(int pipelines, uint64_t seed) {
    return generate_case(pipelines, seed, nullptr);
}

DispatchCase generate_case(int pipelines, uint64_t seed, CaseWitness* witness_out) {
    const int p = std::max(1, pipelines);
    Rng rng(seed * 0x100000001B3ull + 0x6A09E667F3BCC909ull);

    DispatchCase c;
    c.name = "synthetic-" + std::to_string(p) + "p-s" + std::to_string(seed);
    c.n_periods = kPeriods;
    c.period_hours = 1.0;
    c.rho = 35.0;

    // ---- power side: 3 buses in a triangle
    PowerSystem& pw = c.power;
    pw.n_buses = 3;
    pw.slack_bus = 0;
    pw.lines = {{0, 1, 0.10, 0.0}, {1, 2, 0.12, 0.0}, {0, 2, 0.08, 0.0}};

    CoalUnit cheap_coal;
    cheap_coal.bus = 0;
    cheap_coal.p_min = 25;
    cheap_coal.p_max = 240;
    cheap_coal.a = 0.0035 * rng.range(0.9, 1.15);
    cheap_coal.b = rng.range(16.0, 19.0);
    cheap_coal.c = 150.0;
    CoalUnit dear_coal;
    dear_coal.bus = 0;
    dear_coal.p_min = 15;
    dear_coal.p_max = 160;
    dear_coal.a = 0.0060 * rng.range(0.9, 1.15);
    dear_coal.b = rng.range(23.0, 27.0);
    dear_coal.c = 100.0;
    pw.coal_units = {cheap_coal, dear_coal};

    GasUnit gu;
    gu.bus = 1;
    gu.gas_node = p + 1;  // at the demand end: pipe flows stay one-directional
    gu.p_min = 0;
    gu.p_max = 150;
    gu.a = 0.0035;
    gu.b = rng.range(0.9, 1.05);
    gu.c = 3.0;
    pw.gas_units = {gu};

    WindFarm wind;
    wind.bus = 2;
    ElecLoad l1, l2;
    l1.bus = 1;
    l2.bus = 2;
    for (int t = 0; t < kPeriods; ++t) {
        double d = day_curve(t), n = night_curve(t);
        l1.profile.push_back(95.0 + 65.0 * d + rng.range(-4.0, 4.0));
        l2.profile.push_back(60.0 + 45.0 * d + rng.range(-3.0, 3.0));
        wind.profile.push_back(45.0 + 130.0 * n * rng.range(0.9, 1.0));
    }
    pw.wind_farms = {wind};
    pw.loads = {l1, l2};

    P2gUnit p2g;
    p2g.bus = 2;
    p2g.gas_node = std::min(2, p + 1);
    p2g.eta = 0.5;
    p2g.p_max = 40;
    pw.p2g_units = {p2g};

    // ---- gas side: compressor edge 0->1 feeding a path 1..p+1
    GasSystem& gs = c.gas;
    const int n_nodes = p + 2;
    for (int i = 0; i < n_nodes; ++i) gs.nodes.push_back({900.0, 4900.0});

    Compressor comp;
    comp.from = 0;
    comp.to = 1;
    comp.r_min = 1.0;
    comp.r_max = rng.range(1.4, 1.8);
    comp.alpha = rng.range(0.03, 0.05);
    gs.compressors = {comp};

    for (int i = 1; i <= p; ++i) gs.pipelines.push_back({i, i + 1, 1.0});  // k set below

    GasWell cheap_well;
    cheap_well.node = 0;
    cheap_well.g_min = 0;
    cheap_well.g_max = 420;
    cheap_well.cost = rng.range(2.0, 2.6);
    GasWell dear_well;
    dear_well.node = p + 1;
    dear_well.g_min = 0;
    dear_well.g_max = 420;
    dear_well.cost = cheap_well.cost * rng.range(3.0, 3.6);
    gs.wells = {cheap_well, dear_well};

    GasStorage st;
    st.node = p + 1;
    st.s_min = 40;
    st.s_max = 260;
    st.s0 = 120;
    st.g_in = 18;
    st.g_out = 18;
    gs.storages = {st};

    GasLoad gl;
    gl.node = p + 1;
    for (int t = 0; t < kPeriods; ++t)
        gl.profile.push_back(65.0 + 55.0 * day_curve(t) + rng.range(-3.0, 3.0));
    gs.gas_loads = {gl};

    // ---- witness dispatch (the construction point)
    CaseWitness w;
    auto per_t = [&](int elems) {
        return std::vector<std::vector<double>>(kPeriods, std::vector<double>(elems, 0.0));
    };
    w.p_coal = per_t(2);
    w.p_gas = per_t(1);
    w.p_wind = per_t(1);
    w.p_p2g = per_t(1);
    w.g_pipe = per_t(p);
    w.g_comp = per_t(1);
    w.g_well = per_t(2);
    w.g_storage = per_t(1);
    w.s_level = per_t(1);
    w.pressure = per_t(n_nodes);

    for (int t = 0; t < kPeriods; ++t) {
        double load = l1.profile[t] + l2.profile[t];
        // run the gas unit moderately; the optimizer will push it harder
        double pg = 55.0 + 30.0 * day_curve(t);
        double pp = std::min(p2g.p_max, 0.5 * std::max(0.0, wind.profile[t] - 80.0));
        double pwind = std::min(wind.profile[t], 0.55 * load);
        double residual = load + pp - pg - pwind;
        // split across the coal units within their ranges
        double c1 = std::clamp(0.65 * residual, cheap_coal.p_min, cheap_coal.p_max);
        double c2 = std::clamp(residual - c1, dear_coal.p_min, dear_coal.p_max);
        double fix = residual - c1 - c2;  // absorb rounding with wind
        pwind -= fix;
        w.p_coal[t] = {c1, c2};
        w.p_gas[t][0] = pg;
        w.p_wind[t][0] = pwind;
        w.p_p2g[t][0] = pp;
    }

    // gas balance with both wells active; storage idles at the witness
    for (int t = 0; t < kPeriods; ++t) {
        double pg = w.p_gas[t][0];
        double g_gas_unit = gu.a * pg * pg + gu.b * pg + gu.c;
        double g_p2g = p2g.eta * w.p_p2g[t][0];
        double demand = gl.profile[t] + g_gas_unit - g_p2g;
        double w0 = std::min(cheap_well.g_max * 0.7, 0.72 * demand);
        double w1 = demand - w0;
        w.g_well[t] = {w0, w1};
        w.g_storage[t][0] = 0.0;
        w.s_level[t][0] = st.s0;
        double gm = w0 / (1.0 + comp.alpha);
        w.g_comp[t][0] = gm;
        // path flows: cumulative net injection upstream of each pipeline
        std::vector<double> inj(n_nodes, 0.0);
        inj[1] += gm;
        inj[p2g.gas_node] += g_p2g;
        inj[gu.gas_node] -= g_gas_unit;
        inj[p + 1] += w1 - gl.profile[t];
        double acc = 0.0;
        for (int i = 1; i <= p; ++i) {
            acc += inj[i];
            w.g_pipe[t][i - 1] = acc;  // flow i -> i+1
        }
    }

    // size Weymouth constants so the witness uses ~85% of the pressure budget
    // at its peak; the cost-optimal dispatch then overloads the peak hours
    {
        double lo = gs.nodes[1].pi_min, hi = gs.nodes[1].pi_max;
        double budget = (hi - 60.0) - (lo + 60.0);
        std::vector<double> share(p);
        double tot = 0.0;
        for (int i = 0; i < p; ++i) {
            share[i] = rng.range(0.8, 1.2);
            tot += share[i];
        }
        for (int i = 0; i < p; ++i) {
            double theta_peak = 0.0;
            for (int t = 0; t < kPeriods; ++t) {
                double f = w.g_pipe[t][i];
                theta_peak = std::max(theta_peak, std::fabs(f) * std::fabs(f));
            }
            double drop = budget * share[i] / tot * 0.85;
            gs.pipelines[i].k = theta_peak > 1.0 ? theta_peak / drop : 25.0;
        }
    }

    // witness pressures: start high at node 1, walk the drops
    for (int t = 0; t < kPeriods; ++t) {
        double pi1 = gs.nodes[1].pi_max - 60.0;
        w.pressure[t][1] = pi1;
        for (int i = 1; i <= p; ++i) {
            double f = w.g_pipe[t][i - 1];
            w.pressure[t][i + 1] = w.pressure[t][i] - f * std::fabs(f) / gs.pipelines[i - 1].k;
        }
        // compressor inlet: mid compression
        double r_mid = 0.5 * (comp.r_min + comp.r_max);
        w.pressure[t][0] = std::clamp(pi1 / r_mid, gs.nodes[0].pi_min, gs.nodes[0].pi_max);
    }

    // line ratings from witness flows plus margin
    {
        Ptdf f = compute_ptdf(pw);
        for (size_t li = 0; li < pw.lines.size(); ++li) {
            double worst = 0.0;
            for (int t = 0; t < kPeriods; ++t) {
                double flow = 0.0;
                int col = 0;
                for (int i = 0; i < 2; ++i) flow += f.h_g[li][col++] * w.p_coal[t][i];
                flow += f.h_g[li][col++] * w.p_gas[t][0];
                flow += f.h_g[li][col++] * w.p_wind[t][0];
                int dcol = 0;
                flow -= f.h_d[li][dcol++] * l1.profile[t];
                flow -= f.h_d[li][dcol++] * l2.profile[t];
                flow -= f.h_d[li][dcol++] * w.p_p2g[t][0];
                worst = std::max(worst, std::fabs(flow));
            }
            pw.lines[li].capacity = 1.45 * worst + 25.0;
        }
    }

    // ramps and initial outputs from the witness trajectory plus margin
    {
        auto span = [&](auto get) {
            double m = 0.0;
            for (int t = 1; t < kPeriods; ++t) m = std::max(m, std::fabs(get(t) - get(t - 1)));
            return m;
        };
        double mc1 = span([&](int t) { return w.p_coal[t][0]; });
        double mc2 = span([&](int t) { return w.p_coal[t][1]; });
        double mg = span([&](int t) { return w.p_gas[t][0]; });
        pw.coal_units[0].ramp_up = mc1 + 45.0;
        pw.coal_units[0].ramp_dw = -(mc1 + 45.0);
        pw.coal_units[1].ramp_up = mc2 + 40.0;
        pw.coal_units[1].ramp_dw = -(mc2 + 40.0);
        pw.gas_units[0].ramp_up = mg + 50.0;
        pw.gas_units[0].ramp_dw = -(mg + 50.0);
        pw.coal_units[0].p0 = w.p_coal[0][0];
        pw.coal_units[1].p0 = w.p_coal[0][1];
        pw.gas_units[0].p0 = w.p_gas[0][0];
    }

    validate_case(c);
    if (witness_out) *witness_out = w;
    return c;
}

double witness_residual(const DispatchCase& c, const CaseWitness& w) {
    const PowerSystem& pw = c.power;
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

    Ptdf f = effective_ptdf(pw);
    for (int t = 0; t < T; ++t) {
        // generation bounds
        for (size_t i = 0; i < pw.coal_units.size(); ++i)
            bound(w.p_coal[t][i], pw.coal_units[i].p_min, pw.coal_units[i].p_max);
        for (size_t j = 0; j < pw.gas_units.size(); ++j)
            bound(w.p_gas[t][j], pw.gas_units[j].p_min, pw.gas_units[j].p_max);
        for (size_t n = 0; n < pw.wind_farms.size(); ++n)
            bound(w.p_wind[t][n], 0.0, pw.wind_farms[n].profile[t]);
        for (size_t k = 0; k < pw.p2g_units.size(); ++k)
            bound(w.p_p2g[t][k], 0.0, pw.p2g_units[k].p_max);
        // ramps
        for (size_t i = 0; i < pw.coal_units.size(); ++i) {
            double prev = t == 0 ? pw.coal_units[i].p0 : w.p_coal[t - 1][i];
            double d = w.p_coal[t][i] - prev;
            bound(d, pw.coal_units[i].ramp_dw, pw.coal_units[i].ramp_up);
        }
        for (size_t j = 0; j < pw.gas_units.size(); ++j) {
            double prev = t == 0 ? pw.gas_units[j].p0 : w.p_gas[t - 1][j];
            double d = w.p_gas[t][j] - prev;
            bound(d, pw.gas_units[j].ramp_dw, pw.gas_units[j].ramp_up);
        }
        // power balance
        double gen = 0.0, dem = 0.0;
        for (size_t i = 0; i < pw.coal_units.size(); ++i) gen += w.p_coal[t][i];
        for (size_t j = 0; j < pw.gas_units.size(); ++j) gen += w.p_gas[t][j];
        for (size_t n = 0; n < pw.wind_farms.size(); ++n) gen += w.p_wind[t][n];
        for (const auto& d : pw.loads) dem += d.profile[t];
        for (size_t k = 0; k < pw.p2g_units.size(); ++k) dem += w.p_p2g[t][k];
        upd(std::fabs(gen - dem), dem);
        // line flows
        for (size_t li = 0; li < pw.lines.size(); ++li) {
            double flow = 0.0;
            int col = 0;
            for (size_t i = 0; i < pw.coal_units.size(); ++i) flow += f.h_g[li][col++] * w.p_coal[t][i];
            for (size_t j = 0; j < pw.gas_units.size(); ++j) flow += f.h_g[li][col++] * w.p_gas[t][j];
            for (size_t n = 0; n < pw.wind_farms.size(); ++n) flow += f.h_g[li][col++] * w.p_wind[t][n];
            int dcol = 0;
            for (const auto& d : pw.loads) flow -= f.h_d[li][dcol++] * d.profile[t];
            for (size_t k = 0; k < pw.p2g_units.size(); ++k) flow -= f.h_d[li][dcol++] * w.p_p2g[t][k];
            bound(flow, -pw.lines[li].capacity, pw.lines[li].capacity);
        }
        // gas side
        for (size_t n = 0; n < gs.nodes.size(); ++n)
            bound(w.pressure[t][n], gs.nodes[n].pi_min, gs.nodes[n].pi_max);
        for (size_t l = 0; l < gs.pipelines.size(); ++l) {
            const auto& pl = gs.pipelines[l];
            double g = w.g_pipe[t][l];
            double theta = g * std::fabs(g);
            double res = theta - pl.k * (w.pressure[t][pl.from] - w.pressure[t][pl.to]);
            upd(std::fabs(res), theta);
        }
        for (size_t m = 0; m < gs.compressors.size(); ++m) {
            const auto& cm = gs.compressors[m];
            double pi_in = w.pressure[t][cm.from], pi_out = w.pressure[t][cm.to];
            bound(pi_out, cm.r_min * pi_in, cm.r_max * pi_in);
            bound(w.g_comp[t][m], 0.0, std::numeric_limits<double>::infinity());
        }
        for (size_t s = 0; s < gs.wells.size(); ++s)
            bound(w.g_well[t][s], gs.wells[s].g_min, gs.wells[s].g_max);
        for (size_t z = 0; z < gs.storages.size(); ++z) {
            const auto& sz = gs.storages[z];
            bound(w.g_storage[t][z], -sz.g_out, sz.g_in);
            bound(w.s_level[t][z], sz.s_min, sz.s_max);
            double prev = t == 0 ? sz.s0 : w.s_level[t - 1][z];
            upd(std::fabs(w.s_level[t][z] - prev - w.g_storage[t][z]), sz.s_max);
        }
        // node balance
        std::vector<double> net(gs.nodes.size(), 0.0);
        for (size_t s = 0; s < gs.wells.size(); ++s) net[gs.wells[s].node] += w.g_well[t][s];
        for (size_t k = 0; k < pw.p2g_units.size(); ++k)
            net[pw.p2g_units[k].gas_node] += pw.p2g_units[k].eta * w.p_p2g[t][k];
        for (size_t m = 0; m < gs.compressors.size(); ++m) {
            const auto& cm = gs.compressors[m];
            double gm = w.g_comp[t][m];
            net[cm.from] -= gm * (1.0 + cm.alpha);
            net[cm.to] += gm;
        }
        for (size_t l = 0; l < gs.pipelines.size(); ++l) {
            net[gs.pipelines[l].from] -= w.g_pipe[t][l];
            net[gs.pipelines[l].to] += w.g_pipe[t][l];
        }
        for (size_t z = 0; z < gs.storages.size(); ++z) net[gs.storages[z].node] -= w.g_storage[t][z];
        for (size_t j = 0; j < pw.gas_units.size(); ++j) {
            const auto& u = pw.gas_units[j];
            double pg = w.p_gas[t][j];
            net[u.gas_node] -= u.a * pg * pg + u.b * pg + u.c;
        }
        for (const auto& d : gs.gas_loads) net[d.node] -= d.profile[t];
        for (size_t n = 0; n < gs.nodes.size(); ++n) upd(std::fabs(net[n]), 100.0);
    }
    // cyclic storage closure
    for (size_t z = 0; z < gs.storages.size(); ++z)
        upd(std::fabs(w.s_level[T - 1][z] - gs.storages[z].s0), gs.storages[z].s_max);
    return worst;
}

}  // namespace iegs
