// Domain model of the coupled electricity-gas system: case data, JSON
// ingestion/serialization with validation, PTDF computation and a synthetic
// case generator.

#ifndef IEGS_NETMODEL_HPP
#define IEGS_NETMODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iegs {

struct CaseError : std::runtime_error {
    explicit CaseError(const std::string& what) : std::runtime_error(what) {}
};

struct TransmissionLine {
    int from = 0, to = 0;
    double reactance = 0.0;  // p.u.
    double capacity = 0.0;   // MW, symmetric
};

struct CoalUnit {
    int bus = 0;
    double p_min = 0, p_max = 0;        // MW
    double ramp_dw = 0, ramp_up = 0;    // MW per period, ramp_dw <= 0
    double a = 0, b = 0, c = 0;         // $/MW^2, $/MW, $
    double p0 = 0;                      // output before the first period
};

struct GasUnit {
    int bus = 0;
    int gas_node = 0;
    double p_min = 0, p_max = 0;
    double ramp_dw = 0, ramp_up = 0;
    double a = 0, b = 0, c = 0;  // gas-unit/MW^2, gas-unit/MW, gas-unit
    double p0 = 0;
};

struct WindFarm {
    int bus = 0;
    std::vector<double> profile;  // available MW per period
};

struct ElecLoad {
    int bus = 0;
    std::vector<double> profile;  // MW per period
};

struct P2gUnit {
    int bus = 0;
    int gas_node = 0;
    double eta = 0;    // gas-unit per MWh
    double p_max = 0;  // MW
};

struct Ptdf {
    // line x unit (coal, gas, wind order) and line x load (loads then p2g)
    std::vector<std::vector<double>> h_g;
    std::vector<std::vector<double>> h_d;
};

struct PowerSystem {
    int n_buses = 0;
    int slack_bus = 0;
    std::vector<TransmissionLine> lines;
    std::optional<Ptdf> ptdf;  // supplied directly, or computed from lines
    std::vector<CoalUnit> coal_units;
    std::vector<GasUnit> gas_units;
    std::vector<WindFarm> wind_farms;
    std::vector<ElecLoad> loads;
    std::vector<P2gUnit> p2g_units;
};

struct GasNode {
    double pi_min = 0, pi_max = 0;  // squared pressure bounds
};

struct Pipeline {
    int from = 0, to = 0;
    double k = 0;  // Weymouth constant: G|G| = k (pi_from - pi_to)
};

struct Compressor {
    int from = 0, to = 0;     // boosts pressure from inlet to outlet
    double r_min = 1.0;       // squared compression ratio bounds
    double r_max = 1.0;
    double alpha = 0.03;      // gas consumption fraction of throughput
};

struct GasWell {
    int node = 0;
    double g_min = 0, g_max = 0;
    double cost = 0;  // $ per gas-unit
};

struct GasStorage {
    int node = 0;
    double s_min = 0, s_max = 0, s0 = 0;
    double g_in = 0, g_out = 0;  // max injection / extraction per period
};

struct GasLoad {
    int node = 0;
    std::vector<double> profile;
};

struct GasSystem {
    std::vector<GasNode> nodes;
    std::vector<Pipeline> pipelines;
    std::vector<Compressor> compressors;
    std::vector<GasWell> wells;
    std::vector<GasStorage> storages;
    std::vector<GasLoad> gas_loads;
};

struct DispatchCase {
    std::string name;
    int n_periods = 24;
    double period_hours = 1.0;  // reporting metadata, the model is per-period
    double rho = 35.0;          // wind curtailment penalty, $ per MW
    PowerSystem power;
    GasSystem gas;
};

// Throws CaseError explaining the first violated invariant.
void validate_case(const DispatchCase& c);

// JSON case file ingestion / serialization; parse validates.
DispatchCase parse_case(const std::string& json_text);
DispatchCase load_case(const std::string& path);
std::string serialize_case(const DispatchCase& c);

// DC power transfer distribution factors from line data and slack bus.
// Returns the bus-level factors (lines x buses); unit/load matrices are the
// bus columns of the connected elements. Throws CaseError when the network is
// disconnected or the reduced susceptance matrix is singular.
std::vector<std::vector<double>> compute_bus_ptdf(int n_buses, int slack_bus,
                                                  const std::vector<TransmissionLine>& lines);
Ptdf compute_ptdf(const PowerSystem& p);
// The PTDF actually used by model builders (supplied or computed).
Ptdf effective_ptdf(const PowerSystem& p);

// Full primal point of the embedded construction; used to certify generated
// cases feasible by direct evaluation.
struct CaseWitness {
    // [t][element] layouts matching the case's element ordering
    std::vector<std::vector<double>> p_coal, p_gas, p_wind, p_p2g;
    std::vector<std::vector<double>> g_pipe, g_comp, g_well, g_storage, s_level;
    std::vector<std::vector<double>> pressure;  // squared nodal pressures
};

// Deterministic synthetic case: connected gas network with the requested
// pipeline count, one compressor, storage, P2G, gas unit, 24 periods.
DispatchCase generate_case(int pipelines, uint64_t seed);
DispatchCase generate_case(int pipelines, uint64_t seed, CaseWitness* witness);

// Max scaled residual over every constraint the witness claims to satisfy.
double witness_residual(const DispatchCase& c, const CaseWitness& w);

}  // namespace iegs

#endif
