#include <fstream>
#include <sstream>

#include "iegs/netmodel.hpp"
#include "json.hpp"

namespace iegs {

using nlohmann::json;

namespace {

double num(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key))
        throw CaseError(ctx + ": missing required field '" + key + "'");
    if (!j[key].is_number())
        throw CaseError(ctx + ": field '" + key + "' must be a number");
    return j[key].get<double>();
}

double num_or(const json& j, const char* key, double dflt) {
    return j.contains(key) ? j[key].get<double>() : dflt;
}

int integer(const json& j, const char* key, const std::string& ctx) {
    double v = num(j, key, ctx);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw CaseError(ctx + ": field '" + key + "' must be an integer");
    return i;
}

std::vector<double> profile(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_array())
        throw CaseError(ctx + ": missing profile array '" + key + "'");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw CaseError(ctx + ": non-numeric profile entry");
        out.push_back(v.get<double>());
    }
    return out;
}

const json& arr(const json& j, const char* key, const std::string& ctx) {
    static const json empty = json::array();
    if (!j.contains(key)) return empty;
    if (!j[key].is_array()) throw CaseError(ctx + ": '" + key + "' must be an array");
    return j[key];
}

}  // namespace

DispatchCase parse_case(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CaseError(std::string("malformed JSON: ") + e.what());
    }
    DispatchCase c;
    if (!root.contains("meta")) throw CaseError("missing 'meta' object");
    const json& meta = root["meta"];
    c.name = meta.contains("name") ? meta["name"].get<std::string>() : "unnamed";
    c.n_periods = integer(meta, "n_periods", "meta");
    c.period_hours = num_or(meta, "period_hours", 1.0);
    c.rho = num_or(meta, "rho", 35.0);

    if (!root.contains("power")) throw CaseError("missing 'power' object");
    const json& pw = root["power"];
    PowerSystem& p = c.power;
    p.n_buses = integer(pw, "buses", "power");
    p.slack_bus = pw.contains("slack_bus") ? integer(pw, "slack_bus", "power") : 0;
    {
        int i = 0;
        for (const auto& l : arr(pw, "lines", "power")) {
            std::string ctx = "line " + std::to_string(i++);
            TransmissionLine t;
            t.from = integer(l, "from", ctx);
            t.to = integer(l, "to", ctx);
            t.reactance = num_or(l, "reactance", 0.0);
            t.capacity = num(l, "capacity", ctx);
            p.lines.push_back(t);
        }
    }
    if (pw.contains("ptdf")) {
        const json& f = pw["ptdf"];
        Ptdf ptdf;
        for (const auto& row : arr(f, "h_g", "ptdf"))
            ptdf.h_g.push_back(row.get<std::vector<double>>());
        for (const auto& row : arr(f, "h_d", "ptdf"))
            ptdf.h_d.push_back(row.get<std::vector<double>>());
        p.ptdf = std::move(ptdf);
    }
    {
        int i = 0;
        for (const auto& u : arr(pw, "coal_units", "power")) {
            std::string ctx = "coal_unit " + std::to_string(i++);
            CoalUnit cu;
            cu.bus = integer(u, "bus", ctx);
            cu.p_min = num(u, "p_min", ctx);
            cu.p_max = num(u, "p_max", ctx);
            cu.ramp_dw = num(u, "ramp_dw", ctx);
            cu.ramp_up = num(u, "ramp_up", ctx);
            cu.a = num(u, "a", ctx);
            cu.b = num(u, "b", ctx);
            cu.c = num(u, "c", ctx);
            cu.p0 = num_or(u, "p0", cu.p_min);
            p.coal_units.push_back(cu);
        }
        i = 0;
        for (const auto& u : arr(pw, "gas_units", "power")) {
            std::string ctx = "gas_unit " + std::to_string(i++);
            GasUnit gu;
            gu.bus = integer(u, "bus", ctx);
            gu.gas_node = integer(u, "gas_node", ctx);
            gu.p_min = num(u, "p_min", ctx);
            gu.p_max = num(u, "p_max", ctx);
            gu.ramp_dw = num(u, "ramp_dw", ctx);
            gu.ramp_up = num(u, "ramp_up", ctx);
            gu.a = num(u, "a", ctx);
            gu.b = num(u, "b", ctx);
            gu.c = num(u, "c", ctx);
            gu.p0 = num_or(u, "p0", gu.p_min);
            p.gas_units.push_back(gu);
        }
        i = 0;
        for (const auto& u : arr(pw, "wind", "power")) {
            std::string ctx = "wind " + std::to_string(i++);
            WindFarm w;
            w.bus = integer(u, "bus", ctx);
            w.profile = profile(u, "profile", ctx);
            p.wind_farms.push_back(w);
        }
        i = 0;
        for (const auto& u : arr(pw, "loads", "power")) {
            std::string ctx = "load " + std::to_string(i++);
            ElecLoad d;
            d.bus = integer(u, "bus", ctx);
            d.profile = profile(u, "profile", ctx);
            p.loads.push_back(d);
        }
        i = 0;
        for (const auto& u : arr(pw, "p2g", "power")) {
            std::string ctx = "p2g " + std::to_string(i++);
            P2gUnit k;
            k.bus = integer(u, "bus", ctx);
            k.gas_node = integer(u, "gas_node", ctx);
            k.eta = num(u, "eta", ctx);
            k.p_max = num(u, "p_max", ctx);
            p.p2g_units.push_back(k);
        }
    }

    if (!root.contains("gas")) throw CaseError("missing 'gas' object");
    const json& gj = root["gas"];
    GasSystem& g = c.gas;
    {
        int i = 0;
        for (const auto& n : arr(gj, "nodes", "gas")) {
            std::string ctx = "gas node " + std::to_string(i++);
            GasNode gn;
            gn.pi_min = num(n, "pi_min", ctx);
            gn.pi_max = num(n, "pi_max", ctx);
            g.nodes.push_back(gn);
        }
        i = 0;
        for (const auto& l : arr(gj, "pipelines", "gas")) {
            std::string ctx = "pipeline " + std::to_string(i++);
            Pipeline pl;
            pl.from = integer(l, "from", ctx);
            pl.to = integer(l, "to", ctx);
            pl.k = num(l, "k", ctx);
            g.pipelines.push_back(pl);
        }
        i = 0;
        for (const auto& m : arr(gj, "compressors", "gas")) {
            std::string ctx = "compressor " + std::to_string(i++);
            Compressor cm;
            cm.from = integer(m, "from", ctx);
            cm.to = integer(m, "to", ctx);
            cm.r_min = num_or(m, "r_min", 1.0);
            cm.r_max = num(m, "r_max", ctx);
            cm.alpha = num_or(m, "alpha", 0.03);
            g.compressors.push_back(cm);
        }
        i = 0;
        for (const auto& w : arr(gj, "wells", "gas")) {
            std::string ctx = "well " + std::to_string(i++);
            GasWell gw;
            gw.node = integer(w, "node", ctx);
            gw.g_min = num(w, "g_min", ctx);
            gw.g_max = num(w, "g_max", ctx);
            gw.cost = num(w, "cost", ctx);
            g.wells.push_back(gw);
        }
        i = 0;
        for (const auto& s : arr(gj, "storages", "gas")) {
            std::string ctx = "storage " + std::to_string(i++);
            GasStorage st;
            st.node = integer(s, "node", ctx);
            st.s_min = num(s, "s_min", ctx);
            st.s_max = num(s, "s_max", ctx);
            st.s0 = num(s, "s0", ctx);
            st.g_in = num(s, "g_in", ctx);
            st.g_out = num(s, "g_out", ctx);
            g.storages.push_back(st);
        }
        i = 0;
        for (const auto& d : arr(gj, "gas_loads", "gas")) {
            std::string ctx = "gas_load " + std::to_string(i++);
            GasLoad gl;
            gl.node = integer(d, "node", ctx);
            gl.profile = profile(d, "profile", ctx);
            g.gas_loads.push_back(gl);
        }
    }

    validate_case(c);
    return c;
}

DispatchCase load_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CaseError("cannot open case file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_case(ss.str());
}

std::string serialize_case(const DispatchCase& c) {
    json root;
    root["meta"] = {{"name", c.name},
                    {"n_periods", c.n_periods},
                    {"period_hours", c.period_hours},
                    {"rho", c.rho}};
    json pw;
    pw["buses"] = c.power.n_buses;
    pw["slack_bus"] = c.power.slack_bus;
    pw["lines"] = json::array();
    for (const auto& l : c.power.lines)
        pw["lines"].push_back({{"from", l.from},
                               {"to", l.to},
                               {"reactance", l.reactance},
                               {"capacity", l.capacity}});
    if (c.power.ptdf)
        pw["ptdf"] = {{"h_g", c.power.ptdf->h_g}, {"h_d", c.power.ptdf->h_d}};
    pw["coal_units"] = json::array();
    for (const auto& u : c.power.coal_units)
        pw["coal_units"].push_back({{"bus", u.bus},
                                    {"p_min", u.p_min},
                                    {"p_max", u.p_max},
                                    {"ramp_dw", u.ramp_dw},
                                    {"ramp_up", u.ramp_up},
                                    {"a", u.a},
                                    {"b", u.b},
                                    {"c", u.c},
                                    {"p0", u.p0}});
    pw["gas_units"] = json::array();
    for (const auto& u : c.power.gas_units)
        pw["gas_units"].push_back({{"bus", u.bus},
                                   {"gas_node", u.gas_node},
                                   {"p_min", u.p_min},
                                   {"p_max", u.p_max},
                                   {"ramp_dw", u.ramp_dw},
                                   {"ramp_up", u.ramp_up},
                                   {"a", u.a},
                                   {"b", u.b},
                                   {"c", u.c},
                                   {"p0", u.p0}});
    pw["wind"] = json::array();
    for (const auto& w : c.power.wind_farms)
        pw["wind"].push_back({{"bus", w.bus}, {"profile", w.profile}});
    pw["loads"] = json::array();
    for (const auto& d : c.power.loads)
        pw["loads"].push_back({{"bus", d.bus}, {"profile", d.profile}});
    pw["p2g"] = json::array();
    for (const auto& k : c.power.p2g_units)
        pw["p2g"].push_back({{"bus", k.bus},
                             {"gas_node", k.gas_node},
                             {"eta", k.eta},
                             {"p_max", k.p_max}});
    root["power"] = pw;

    json gj;
    gj["nodes"] = json::array();
    for (const auto& n : c.gas.nodes)
        gj["nodes"].push_back({{"pi_min", n.pi_min}, {"pi_max", n.pi_max}});
    gj["pipelines"] = json::array();
    for (const auto& l : c.gas.pipelines)
        gj["pipelines"].push_back({{"from", l.from}, {"to", l.to}, {"k", l.k}});
    gj["compressors"] = json::array();
    for (const auto& m : c.gas.compressors)
        gj["compressors"].push_back({{"from", m.from},
                                     {"to", m.to},
                                     {"r_min", m.r_min},
                                     {"r_max", m.r_max},
                                     {"alpha", m.alpha}});
    gj["wells"] = json::array();
    for (const auto& w : c.gas.wells)
        gj["wells"].push_back({{"node", w.node},
                               {"g_min", w.g_min},
                               {"g_max", w.g_max},
                               {"cost", w.cost}});
    gj["storages"] = json::array();
    for (const auto& s : c.gas.storages)
        gj["storages"].push_back({{"node", s.node},
                                  {"s_min", s.s_min},
                                  {"s_max", s.s_max},
                                  {"s0", s.s0},
                                  {"g_in", s.g_in},
                                  {"g_out", s.g_out}});
    gj["gas_loads"] = json::array();
    for (const auto& d : c.gas.gas_loads)
        gj["gas_loads"].push_back({{"node", d.node}, {"profile", d.profile}});
    root["gas"] = gj;
    return root.dump(2) + "\n";
}

}  // namespace iegs
