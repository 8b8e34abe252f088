// Incremental piecewise-linear encoder and outer-approximation cuts for
// convex quadratic epigraphs.

#ifndef IEGS_PWL_HPP
#define IEGS_PWL_HPP

#include <span>
#include <vector>

#include "iegs/lp.hpp"

namespace iegs {

// Incremental ("delta") formulation over breakpoints x_0 < ... < x_K:
//   x = x_0 + sum_k (x_k - x_{k-1}) * fill_k
//   y = f_0 + sum_k (f_k - f_{k-1}) * fill_k
// with one segment binary per segment enforcing prefix fills:
//   fill_{k+1} <= z_k <= fill_k.
struct PwlEncoding {
    std::vector<double> breakpoints;
    std::vector<double> values;
    int x_col = -1;  // bound variable (argument)
    int y_col = -1;  // encoded function value
    std::vector<int> fill_cols;     // one per segment, in [0,1]
    std::vector<int> segment_bins;  // one binary per segment
    std::vector<int> rows;          // all constraint rows added
};

// Adds the encoding to `mip`, linking existing columns x_col / y_col.
// Throws std::invalid_argument unless breakpoints are strictly increasing
// with matching value count (>= 2 points).
PwlEncoding encode_pwl(MixedIntegerProgram& mip, int x_col, int y_col,
                       std::span<const double> breakpoints,
                       std::span<const double> values);

// Exact PWL interpolant of the sample points (clamped outside the range).
double pwl_interpolate(std::span<const double> xs, std::span<const double> fs,
                       double x);

// Supporting hyperplane of F >= a P^2 + b P + c at P = p_bar:
//   F >= slope * P + offset.
struct OaCut {
    double slope;
    double offset;
};

OaCut oa_refine(double a, double b, double c, double p_bar);

}  // namespace iegs

#endif
