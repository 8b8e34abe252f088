#include "iegs/lp.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace iegs {

int LinearProgram::add_col(double cost, double lb, double ub) {
    obj.push_back(cost);
    col_lb.push_back(lb);
    col_ub.push_back(ub);
    return n_cols++;
}

int LinearProgram::add_row(RowSense s, double rhs_value) {
    sense.push_back(s);
    rhs.push_back(rhs_value);
    return static_cast<int>(rhs.size()) - 1;
}

int LinearProgram::add_row(RowSense s, double rhs_value,
                           std::initializer_list<std::pair<int, double>> terms) {
    int r = add_row(s, rhs_value);
    for (const auto& [c, v] : terms) add_term(r, c, v);
    return r;
}

void LinearProgram::add_term(int row, int col, double val) {
    if (val == 0.0) return;
    elems.push_back({row, col, val});
}

void LinearProgram::validate() const {
    auto bad = [](double v) { return std::isnan(v) || std::isinf(v); };
    if (static_cast<int>(obj.size()) != n_cols ||
        static_cast<int>(col_lb.size()) != n_cols ||
        static_cast<int>(col_ub.size()) != n_cols)
        throw std::invalid_argument("lp: column array size mismatch");
    for (int j = 0; j < n_cols; ++j) {
        if (bad(obj[j])) throw std::invalid_argument("lp: non-finite objective");
        if (std::isnan(col_lb[j]) || std::isnan(col_ub[j]) || col_lb[j] > col_ub[j])
            throw std::invalid_argument("lp: inconsistent bounds on column " +
                                        std::to_string(j));
    }
    const int m = n_rows();
    for (const auto& e : elems) {
        if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n_cols)
            throw std::invalid_argument("lp: element index out of range");
        if (bad(e.val)) throw std::invalid_argument("lp: non-finite coefficient");
    }
    for (double r : rhs)
        if (bad(r)) throw std::invalid_argument("lp: non-finite rhs");
}

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterLimit: return "iteration_limit";
        case LpStatus::NumFail: return "numerical_failure";
    }
    return "?";
}

void dump_lp(const LinearProgram& lp, std::ostream& os,
             const std::vector<int>* binaries) {
    os << "# lp dump v1: rows=" << lp.n_rows() << " cols=" << lp.n_cols << "\n";
    os << "minimize\n ";
    for (int j = 0; j < lp.n_cols; ++j)
        if (lp.obj[j] != 0.0) os << " " << lp.obj[j] << " x" << j;
    os << "\nsubject to\n";
    // gather row-wise
    std::vector<std::vector<std::pair<int, double>>> rows(lp.n_rows());
    for (const auto& e : lp.elems) rows[e.row].push_back({e.col, e.val});
    for (int i = 0; i < lp.n_rows(); ++i) {
        os << " r" << i << ":";
        for (const auto& [c, v] : rows[i]) os << " " << v << " x" << c;
        switch (lp.sense[i]) {
            case RowSense::LE: os << " <= "; break;
            case RowSense::EQ: os << " = "; break;
            case RowSense::GE: os << " >= "; break;
        }
        os << lp.rhs[i] << "\n";
    }
    os << "bounds\n";
    for (int j = 0; j < lp.n_cols; ++j)
        os << " " << lp.col_lb[j] << " <= x" << j << " <= " << lp.col_ub[j] << "\n";
    if (binaries && !binaries->empty()) {
        os << "binaries\n";
        for (int j : *binaries) os << " x" << j;
        os << "\n";
    }
}

}  // namespace iegs
