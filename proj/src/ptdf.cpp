#include <cmath>
#include <vector>

#include "iegs/netmodel.hpp"

namespace iegs {

namespace {

// Gaussian elimination with partial pivoting; throws on singularity.
std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
        if (std::fabs(A[piv][k]) < 1e-10)
            throw CaseError("ptdf: reduced susceptance matrix is singular (network disconnected?)");
        std::swap(A[piv], A[k]);
        std::swap(b[piv], b[k]);
        for (int i = k + 1; i < n; ++i) {
            double f = A[i][k] / A[k][k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

}  // namespace

std::vector<std::vector<double>> compute_bus_ptdf(int n_buses, int slack_bus,
                                                  const std::vector<TransmissionLine>& lines) {
    // connectivity check first for a clear error
    {
        std::vector<std::vector<int>> adj(n_buses);
        for (const auto& l : lines) {
            adj[l.from].push_back(l.to);
            adj[l.to].push_back(l.from);
        }
        std::vector<char> seen(n_buses, 0);
        std::vector<int> stack = {slack_bus};
        seen[slack_bus] = 1;
        while (!stack.empty()) {
            int b = stack.back();
            stack.pop_back();
            for (int nb : adj[b])
                if (!seen[nb]) {
                    seen[nb] = 1;
                    stack.push_back(nb);
                }
        }
        for (int b = 0; b < n_buses; ++b)
            if (!seen[b]) throw CaseError("ptdf: bus " + std::to_string(b) +
                                          " is disconnected from the slack bus");
    }

    const int nl = static_cast<int>(lines.size());
    std::vector<std::vector<double>> factors(nl, std::vector<double>(n_buses, 0.0));
    if (n_buses == 1 || nl == 0) return factors;

    // reduced susceptance matrix (slack removed)
    std::vector<int> red(n_buses, -1);
    int nr = 0;
    for (int b = 0; b < n_buses; ++b)
        if (b != slack_bus) red[b] = nr++;
    std::vector<std::vector<double>> B(nr, std::vector<double>(nr, 0.0));
    for (const auto& l : lines) {
        double y = 1.0 / l.reactance;
        int i = red[l.from], j = red[l.to];
        if (i >= 0) B[i][i] += y;
        if (j >= 0) B[j][j] += y;
        if (i >= 0 && j >= 0) {
            B[i][j] -= y;
            B[j][i] -= y;
        }
    }

    // one solve per bus: theta response to unit injection (slack absorbs)
    for (int b = 0; b < n_buses; ++b) {
        if (b == slack_bus) continue;  // factors stay zero
        std::vector<double> rhs(nr, 0.0);
        rhs[red[b]] = 1.0;
        std::vector<double> theta = solve_dense(B, rhs);
        for (int li = 0; li < nl; ++li) {
            const auto& l = lines[li];
            double ti = l.from == slack_bus ? 0.0 : theta[red[l.from]];
            double tj = l.to == slack_bus ? 0.0 : theta[red[l.to]];
            factors[li][b] = (ti - tj) / l.reactance;
        }
    }
    return factors;
}

Ptdf compute_ptdf(const PowerSystem& p) {
    auto bus = compute_bus_ptdf(p.n_buses, p.slack_bus, p.lines);
    const int nl = static_cast<int>(p.lines.size());
    Ptdf f;
    f.h_g.assign(nl, {});
    f.h_d.assign(nl, {});
    for (int li = 0; li < nl; ++li) {
        for (const auto& u : p.coal_units) f.h_g[li].push_back(bus[li][u.bus]);
        for (const auto& u : p.gas_units) f.h_g[li].push_back(bus[li][u.bus]);
        for (const auto& w : p.wind_farms) f.h_g[li].push_back(bus[li][w.bus]);
        for (const auto& d : p.loads) f.h_d[li].push_back(bus[li][d.bus]);
        for (const auto& k : p.p2g_units) f.h_d[li].push_back(bus[li][k.bus]);
    }
    return f;
}

Ptdf effective_ptdf(const PowerSystem& p) {
    if (p.ptdf) return *p.ptdf;
    return compute_ptdf(p);
}

}  // namespace iegs
