// Linear / mixed-integer program containers shared by the solver kernel
// and the model builders.

#ifndef IEGS_LP_HPP
#define IEGS_LP_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace iegs {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : char { LE = 'L', EQ = 'E', GE = 'G' };

struct LinearProgram {
    int n_cols = 0;
    std::vector<double> obj;     // one per column
    std::vector<double> col_lb;  // -inf allowed
    std::vector<double> col_ub;  // +inf allowed

    struct Elem {
        int row;
        int col;
        double val;
    };
    std::vector<Elem> elems;  // sparse triplets, duplicates summed
    std::vector<RowSense> sense;
    std::vector<double> rhs;

    int add_col(double cost, double lb, double ub);
    int add_row(RowSense s, double rhs_value);
    int add_row(RowSense s, double rhs_value,
                std::initializer_list<std::pair<int, double>> terms);
    void add_term(int row, int col, double val);

    int n_rows() const { return static_cast<int>(rhs.size()); }

    // Throws std::invalid_argument on NaN/inf coefficients, out-of-range
    // indices or inverted bounds.
    void validate() const;
};

enum class LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
    NumFail,
};

const char* to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::NumFail;
    double obj = 0.0;
    std::vector<double> x;             // per column
    std::vector<double> row_dual;      // d(obj)/d(rhs) per row
    std::vector<double> reduced_cost;  // per column
};

struct MixedIntegerProgram {
    LinearProgram lp;
    std::vector<int> binaries;  // column indices restricted to {0,1}
};

struct MipResult {
    LpSolution sol;           // best incumbent (duals are from its LP re-solve)
    double best_bound = -kInf;
    long nodes = 0;
    bool node_limit_hit = false;
    double gap = 0.0;  // proven relative gap at termination
};

// Plain-text dump for cross-checking models against external tools.
void dump_lp(const LinearProgram& lp, std::ostream& os,
             const std::vector<int>* binaries = nullptr);

}  // namespace iegs

#endif
