// Test-only oracles: brute-force vertex enumeration for tiny LPs and
// finite-difference duals. Independent of the simplex implementation.

#ifndef IEGS_TESTS_LP_ORACLE_HPP
#define IEGS_TESTS_LP_ORACLE_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "iegs/lp.hpp"

namespace iegs::testsupport {

// Dense Gaussian elimination, returns false if singular.
inline bool dense_solve(std::vector<std::vector<double>> A, std::vector<double> b,
                        std::vector<double>& x) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
        if (std::fabs(A[piv][k]) < 1e-11) return false;
        std::swap(A[piv], A[k]);
        std::swap(b[piv], b[k]);
        for (int i = k + 1; i < n; ++i) {
            double f = A[i][k] / A[k][k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return true;
}

// Enumerates candidate vertices of a tiny LP (n <= ~8) by intersecting every
// n-subset of {row equalities, variable bounds}; returns the best feasible
// objective, or nullopt when no feasible vertex exists.
inline std::optional<double> enumerate_lp(const LinearProgram& lp,
                                          std::vector<double>* argmin = nullptr) {
    const int n = lp.n_cols;
    const int m = lp.n_rows();
    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    for (const auto& e : lp.elems) rows[e.row][e.col] += e.val;

    struct Hyp {
        std::vector<double> a;
        double b;
    };
    std::vector<Hyp> hyps;
    for (int i = 0; i < m; ++i) hyps.push_back({rows[i], lp.rhs[i]});
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        if (lp.col_lb[j] > -kInf) hyps.push_back({e, lp.col_lb[j]});
        if (lp.col_ub[j] < kInf) hyps.push_back({e, lp.col_ub[j]});
    }

    const int H = static_cast<int>(hyps.size());
    std::vector<int> pick(n, 0);
    double best = kInf;
    bool found = false;
    std::vector<double> x;

    // iterate over combinations of size n from H
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    if (H < n) return std::nullopt;
    while (true) {
        std::vector<std::vector<double>> A(n, std::vector<double>(n));
        std::vector<double> b(n);
        for (int i = 0; i < n; ++i) {
            A[i] = hyps[idx[i]].a;
            b[i] = hyps[idx[i]].b;
        }
        if (dense_solve(A, b, x)) {
            bool feas = true;
            for (int j = 0; j < n && feas; ++j)
                if (x[j] < lp.col_lb[j] - 1e-7 || x[j] > lp.col_ub[j] + 1e-7) feas = false;
            for (int i = 0; i < m && feas; ++i) {
                double act = 0.0;
                for (int j = 0; j < n; ++j) act += rows[i][j] * x[j];
                switch (lp.sense[i]) {
                    case RowSense::LE: feas = act <= lp.rhs[i] + 1e-7; break;
                    case RowSense::GE: feas = act >= lp.rhs[i] - 1e-7; break;
                    case RowSense::EQ: feas = std::fabs(act - lp.rhs[i]) <= 1e-7; break;
                }
            }
            if (feas) {
                double obj = 0.0;
                for (int j = 0; j < n; ++j) obj += lp.obj[j] * x[j];
                if (!found || obj < best) {
                    best = obj;
                    if (argmin) *argmin = x;
                }
                found = true;
            }
        }
        // next combination
        int i = n - 1;
        while (i >= 0 && idx[i] == H - n + i) --i;
        if (i < 0) break;
        idx[i]++;
        for (int k = i + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
    }
    (void)pick;
    if (!found) return std::nullopt;
    return best;
}

// d(optimal objective)/d(rhs of row r), central finite difference through the
// enumeration oracle.
inline double fd_row_dual(const LinearProgram& lp, int r, double h = 1e-5) {
    LinearProgram a = lp, b = lp;
    a.rhs[r] += h;
    b.rhs[r] -= h;
    auto fa = enumerate_lp(a), fb = enumerate_lp(b);
    if (!fa || !fb) return std::nan("");
    return (*fa - *fb) / (2 * h);
}

}  // namespace iegs::testsupport

#endif
