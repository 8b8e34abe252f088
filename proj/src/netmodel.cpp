#include "iegs/netmodel.hpp"

#include <cmath>
#include <string>

namespace iegs {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw CaseError(msg);
}

void check_profile(const std::vector<double>& p, int n_periods, const std::string& what) {
    require(static_cast<int>(p.size()) == n_periods,
            what + ": profile length " + std::to_string(p.size()) +
                " does not match n_periods " + std::to_string(n_periods));
    for (double v : p)
        require(std::isfinite(v), what + ": non-finite profile entry");
}

}  // namespace

void validate_case(const DispatchCase& c) {
    require(c.n_periods >= 1, "meta: n_periods must be >= 1");
    require(c.rho >= 0, "meta: rho must be >= 0");
    require(c.period_hours > 0, "meta: period_hours must be > 0");

    const PowerSystem& p = c.power;
    require(p.n_buses >= 1, "power: need at least one bus");
    require(p.slack_bus >= 0 && p.slack_bus < p.n_buses, "power: slack_bus out of range");
    auto check_bus = [&](int b, const std::string& what) {
        require(b >= 0 && b < p.n_buses, what + ": bus " + std::to_string(b) + " does not exist");
    };
    for (size_t i = 0; i < p.lines.size(); ++i) {
        const auto& l = p.lines[i];
        check_bus(l.from, "line " + std::to_string(i));
        check_bus(l.to, "line " + std::to_string(i));
        require(l.from != l.to, "line " + std::to_string(i) + ": self loop");
        require(l.capacity > 0, "line " + std::to_string(i) + ": capacity must be > 0");
        require(l.reactance > 0, "line " + std::to_string(i) + ": reactance must be > 0");
    }
    const GasSystem& g = c.gas;
    const int n_nodes = static_cast<int>(g.nodes.size());
    auto check_node = [&](int n, const std::string& what) {
        require(n >= 0 && n < n_nodes, what + ": gas node " + std::to_string(n) + " does not exist");
    };

    for (size_t i = 0; i < p.coal_units.size(); ++i) {
        const auto& u = p.coal_units[i];
        std::string what = "coal_unit " + std::to_string(i);
        check_bus(u.bus, what);
        require(u.p_min <= u.p_max, what + ": p_min > p_max");
        require(u.a > 0, what + ": quadratic cost coefficient a must be > 0");
        require(u.ramp_dw <= 0 && u.ramp_up >= 0, what + ": need ramp_dw <= 0 <= ramp_up");
    }
    for (size_t i = 0; i < p.gas_units.size(); ++i) {
        const auto& u = p.gas_units[i];
        std::string what = "gas_unit " + std::to_string(i);
        check_bus(u.bus, what);
        check_node(u.gas_node, what);
        require(u.p_min <= u.p_max, what + ": p_min > p_max");
        require(u.a >= 0, what + ": consumption coefficient a must be >= 0");
        require(u.ramp_dw <= 0 && u.ramp_up >= 0, what + ": need ramp_dw <= 0 <= ramp_up");
    }
    for (size_t i = 0; i < p.wind_farms.size(); ++i) {
        check_bus(p.wind_farms[i].bus, "wind " + std::to_string(i));
        check_profile(p.wind_farms[i].profile, c.n_periods, "wind " + std::to_string(i));
        for (double v : p.wind_farms[i].profile)
            require(v >= 0, "wind " + std::to_string(i) + ": negative availability");
    }
    for (size_t i = 0; i < p.loads.size(); ++i) {
        check_bus(p.loads[i].bus, "load " + std::to_string(i));
        check_profile(p.loads[i].profile, c.n_periods, "load " + std::to_string(i));
    }
    for (size_t i = 0; i < p.p2g_units.size(); ++i) {
        const auto& u = p.p2g_units[i];
        std::string what = "p2g " + std::to_string(i);
        check_bus(u.bus, what);
        check_node(u.gas_node, what);
        require(u.eta > 0, what + ": eta must be > 0");
        require(u.p_max >= 0, what + ": p_max must be >= 0");
    }
    if (p.ptdf) {
        const auto& f = *p.ptdf;
        size_t n_units = p.coal_units.size() + p.gas_units.size() + p.wind_farms.size();
        size_t n_dem = p.loads.size() + p.p2g_units.size();
        require(f.h_g.size() == p.lines.size() && f.h_d.size() == p.lines.size(),
                "ptdf: row count must equal line count");
        for (const auto& r : f.h_g)
            require(r.size() == n_units, "ptdf: h_g column count must match unit count");
        for (const auto& r : f.h_d)
            require(r.size() == n_dem, "ptdf: h_d column count must match load+p2g count");
    }

    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        require(n.pi_min >= 0 && n.pi_min <= n.pi_max,
                "gas node " + std::to_string(i) + ": need 0 <= pi_min <= pi_max");
    }
    for (size_t i = 0; i < g.pipelines.size(); ++i) {
        const auto& l = g.pipelines[i];
        std::string what = "pipeline " + std::to_string(i);
        check_node(l.from, what);
        check_node(l.to, what);
        require(l.from != l.to, what + ": self loop");
        require(l.k > 0, what + ": Weymouth constant must be > 0");
    }
    for (size_t i = 0; i < g.compressors.size(); ++i) {
        const auto& m = g.compressors[i];
        std::string what = "compressor " + std::to_string(i);
        check_node(m.from, what);
        check_node(m.to, what);
        require(m.from != m.to, what + ": self loop");
        require(m.r_min >= 1.0 && m.r_min <= m.r_max, what + ": need 1 <= r_min <= r_max");
        require(m.alpha >= 0.0 && m.alpha <= 0.1, what + ": alpha outside [0, 0.1]");
    }
    for (size_t i = 0; i < g.wells.size(); ++i) {
        const auto& w = g.wells[i];
        std::string what = "well " + std::to_string(i);
        check_node(w.node, what);
        require(w.g_min <= w.g_max, what + ": g_min > g_max");
    }
    for (size_t i = 0; i < g.storages.size(); ++i) {
        const auto& s = g.storages[i];
        std::string what = "storage " + std::to_string(i);
        check_node(s.node, what);
        require(s.s_min <= s.s0 && s.s0 <= s.s_max, what + ": need s_min <= s0 <= s_max");
        require(s.g_in >= 0 && s.g_out >= 0, what + ": rates must be >= 0");
    }
    for (size_t i = 0; i < g.gas_loads.size(); ++i) {
        check_node(g.gas_loads[i].node, "gas_load " + std::to_string(i));
        check_profile(g.gas_loads[i].profile, c.n_periods, "gas_load " + std::to_string(i));
    }
}

}  // namespace iegs
