#include <cmath>
#include <stdexcept>
#include <vector>

#include "iegs/baselines.hpp"

namespace iegs {

namespace {

struct FreeVar {
    double lo, hi;
    double* slot;
};

}  // namespace

OracleResult brute_force(const DispatchCase& c, double grid_step) {
    const PowerSystem& pw = c.power;
    const GasSystem& gs = c.gas;
    if (c.n_periods != 1)
        throw std::invalid_argument("brute_force: single-period cases only");
    if (gs.pipelines.size() > 2)
        throw std::invalid_argument("brute_force: at most two pipelines");
    if (pw.coal_units.size() + pw.gas_units.size() > 2 || pw.coal_units.empty())
        throw std::invalid_argument("brute_force: need 1-2 units incl. one coal unit");
    if (!gs.compressors.empty())
        throw std::invalid_argument("brute_force: compressor-free gas networks only");
    if (gs.wells.empty())
        throw std::invalid_argument("brute_force: need at least one well");
    if (!(grid_step > 0) || grid_step > 1)
        throw std::invalid_argument("brute_force: grid step must be in (0, 1]");

    // tree check: pipelines must span all nodes without cycles
    const int n_nodes = static_cast<int>(gs.nodes.size());
    if (static_cast<int>(gs.pipelines.size()) != n_nodes - 1)
        throw std::invalid_argument("brute_force: gas network must be a tree");

    // decision variables: coal[1:], gas units, wind, p2g, wells[1:];
    // coal[0] is pinned by the power balance, wells[0] by the gas balance,
    // storage exchange by the cyclic closure, pressures by interval analysis
    double p_coal1 = 0, p_gas = 0, p_wind = 0, p_p2g = 0, w_extra = 0;
    std::vector<FreeVar> vars;
    if (pw.coal_units.size() > 1)
        vars.push_back({pw.coal_units[1].p_min, pw.coal_units[1].p_max, &p_coal1});
    if (!pw.gas_units.empty())
        vars.push_back({pw.gas_units[0].p_min, pw.gas_units[0].p_max, &p_gas});
    if (!pw.wind_farms.empty())
        vars.push_back({0.0, pw.wind_farms[0].profile[0], &p_wind});
    if (!pw.p2g_units.empty() && pw.p2g_units[0].p_max > 0)
        vars.push_back({0.0, pw.p2g_units[0].p_max, &p_p2g});
    if (gs.wells.size() > 1)
        vars.push_back({gs.wells[1].g_min, gs.wells[1].g_max, &w_extra});
    if (gs.wells.size() > 2)
        throw std::invalid_argument("brute_force: at most two wells");

    const long per_axis = static_cast<long>(std::llround(1.0 / grid_step)) + 1;
    double budget = 1.0;
    for (size_t i = 0; i < vars.size(); ++i) budget *= static_cast<double>(per_axis);
    if (budget > 1e8)
        throw std::invalid_argument("brute_force: enumeration budget exceeded");

    double elec_load = 0.0;
    for (const auto& d : pw.loads) elec_load += d.profile[0];
    double gas_load_total = 0.0;
    std::vector<double> node_gas_load(n_nodes, 0.0);
    for (const auto& d : gs.gas_loads) {
        gas_load_total += d.profile[0];
        node_gas_load[d.node] += d.profile[0];
    }
    Ptdf f = effective_ptdf(pw);

    // tree adjacency for the flow solve
    std::vector<std::vector<std::pair<int, int>>> adj(n_nodes);  // (pipeline, other)
    for (size_t l = 0; l < gs.pipelines.size(); ++l) {
        adj[gs.pipelines[l].from].push_back({static_cast<int>(l), gs.pipelines[l].to});
        adj[gs.pipelines[l].to].push_back({static_cast<int>(l), gs.pipelines[l].from});
    }

    OracleResult out;
    out.grid_step = grid_step;

    std::vector<long> odo(vars.size(), 0);
    std::vector<double> flows(gs.pipelines.size(), 0.0);
    std::vector<double> net(n_nodes, 0.0);

    while (true) {
        out.points_scanned++;
        for (size_t i = 0; i < vars.size(); ++i)
            *vars[i].slot = vars[i].lo + (vars[i].hi - vars[i].lo) *
                                             static_cast<double>(odo[i]) /
                                             static_cast<double>(per_axis - 1);

        bool feasible = true;
        double obj = 0.0;
        do {
            // power balance pins the first coal unit
            double p_coal0 = elec_load + p_p2g - p_gas - p_wind - p_coal1;
            const auto& u0 = pw.coal_units[0];
            if (p_coal0 < u0.p_min - 1e-9 || p_coal0 > u0.p_max + 1e-9) { feasible = false; break; }
            if (p_coal0 - u0.p0 > u0.ramp_up + 1e-9 || p_coal0 - u0.p0 < u0.ramp_dw - 1e-9) {
                feasible = false;
                break;
            }
            if (pw.coal_units.size() > 1) {
                const auto& u1 = pw.coal_units[1];
                if (p_coal1 - u1.p0 > u1.ramp_up + 1e-9 || p_coal1 - u1.p0 < u1.ramp_dw - 1e-9) {
                    feasible = false;
                    break;
                }
            }
            if (!pw.gas_units.empty()) {
                const auto& ug = pw.gas_units[0];
                if (p_gas - ug.p0 > ug.ramp_up + 1e-9 || p_gas - ug.p0 < ug.ramp_dw - 1e-9) {
                    feasible = false;
                    break;
                }
            }
            // line flows
            for (size_t li = 0; li < pw.lines.size(); ++li) {
                double flow = 0.0;
                int col = 0;
                flow += f.h_g[li][col++] * p_coal0;
                if (pw.coal_units.size() > 1) flow += f.h_g[li][col++] * p_coal1;
                if (!pw.gas_units.empty()) flow += f.h_g[li][col++] * p_gas;
                if (!pw.wind_farms.empty()) flow += f.h_g[li][col++] * p_wind;
                int dcol = 0;
                for (const auto& d : pw.loads) flow -= f.h_d[li][dcol++] * d.profile[0];
                if (!pw.p2g_units.empty()) flow -= f.h_d[li][dcol++] * p_p2g;
                if (std::fabs(flow) > pw.lines[li].capacity + 1e-9) { feasible = false; break; }
            }
            if (!feasible) break;

            // gas balance pins the first well
            double g_gas_burn = 0.0;
            if (!pw.gas_units.empty()) {
                const auto& ug = pw.gas_units[0];
                g_gas_burn = ug.a * p_gas * p_gas + ug.b * p_gas + ug.c;
            }
            double g_p2g = pw.p2g_units.empty() ? 0.0 : pw.p2g_units[0].eta * p_p2g;
            double w0 = gas_load_total + g_gas_burn - g_p2g - w_extra;
            const auto& well0 = gs.wells[0];
            if (w0 < well0.g_min - 1e-9 || w0 > well0.g_max + 1e-9) { feasible = false; break; }

            // storage pinned idle by the cyclic closure (checked in scope)
            // nodal net injections -> unique tree flows by leaf stripping
            for (int n = 0; n < n_nodes; ++n) net[n] = -node_gas_load[n];
            net[well0.node] += w0;
            if (gs.wells.size() > 1) net[gs.wells[1].node] += w_extra;
            if (!pw.p2g_units.empty()) net[pw.p2g_units[0].gas_node] += g_p2g;
            if (!pw.gas_units.empty()) net[pw.gas_units[0].gas_node] -= g_gas_burn;

            std::vector<int> degree(n_nodes, 0);
            std::vector<char> done_edge(gs.pipelines.size(), 0), done_node(n_nodes, 0);
            for (int n = 0; n < n_nodes; ++n) degree[n] = static_cast<int>(adj[n].size());
            std::vector<int> leaves;
            for (int n = 0; n < n_nodes; ++n)
                if (degree[n] == 1) leaves.push_back(n);
            std::vector<double> residual = net;
            while (!leaves.empty()) {
                int n = leaves.back();
                leaves.pop_back();
                if (done_node[n]) continue;
                int edge = -1, other = -1;
                for (auto [l, o] : adj[n])
                    if (!done_edge[l]) { edge = l; other = o; }
                if (edge < 0) break;  // root reached
                done_node[n] = 1;
                done_edge[edge] = 1;
                // flow is oriented from -> to; the leaf exports its surplus
                double surplus = residual[n];
                if (gs.pipelines[edge].from == n) flows[edge] = surplus;
                else flows[edge] = -surplus;
                residual[other] += surplus;
                if (--degree[other] == 1 && !done_node[other]) leaves.push_back(other);
            }
            // the final node's residual must vanish (global balance holds)
            // pressure feasibility: pi_n = pi_root - cumulative drop, interval check
            std::vector<double> drop(n_nodes, 0.0);
            std::vector<char> seen(n_nodes, 0);
            std::vector<int> stack = {0};
            seen[0] = 1;
            while (!stack.empty()) {
                int n = stack.back();
                stack.pop_back();
                for (auto [l, o] : adj[n]) {
                    if (seen[o]) continue;
                    seen[o] = 1;
                    const auto& pl = gs.pipelines[l];
                    double th = flows[l] * std::fabs(flows[l]) / pl.k;
                    // pi_from - pi_to = th
                    drop[o] = pl.from == n ? drop[n] - th : drop[n] + th;
                    stack.push_back(o);
                }
            }
            double lo = -kInf, hi = kInf;
            for (int n = 0; n < n_nodes; ++n) {
                lo = std::max(lo, gs.nodes[n].pi_min - drop[n]);
                hi = std::min(hi, gs.nodes[n].pi_max - drop[n]);
            }
            if (lo > hi + 1e-9) { feasible = false; break; }

            // objective
            obj = well0.cost * w0;
            if (gs.wells.size() > 1) obj += gs.wells[1].cost * w_extra;
            obj += u0.a * p_coal0 * p_coal0 + u0.b * p_coal0 + u0.c;
            if (pw.coal_units.size() > 1) {
                const auto& u1 = pw.coal_units[1];
                obj += u1.a * p_coal1 * p_coal1 + u1.b * p_coal1 + u1.c;
            }
            if (!pw.wind_farms.empty())
                obj += c.rho * (pw.wind_farms[0].profile[0] - p_wind);
        } while (false);

        if (feasible && (!out.found || obj < out.objective)) {
            out.found = true;
            out.objective = obj;
        }

        // odometer
        size_t d = 0;
        while (d < odo.size()) {
            if (++odo[d] < per_axis) break;
            odo[d] = 0;
            d++;
        }
        if (d >= odo.size()) break;
        if (vars.empty()) break;
    }
    return out;
}

}  // namespace iegs
