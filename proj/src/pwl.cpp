#include "iegs/pwl.hpp"

#include <stdexcept>

namespace iegs {

PwlEncoding encode_pwl(MixedIntegerProgram& mip, int x_col, int y_col,
                       std::span<const double> breakpoints,
                       std::span<const double> values) {
    if (breakpoints.size() < 2 || breakpoints.size() != values.size())
        throw std::invalid_argument("encode_pwl: need >=2 breakpoints with values");
    for (size_t k = 1; k < breakpoints.size(); ++k)
        if (!(breakpoints[k] > breakpoints[k - 1]))
            throw std::invalid_argument("encode_pwl: breakpoints must be strictly increasing");

    LinearProgram& lp = mip.lp;
    PwlEncoding enc;
    enc.breakpoints.assign(breakpoints.begin(), breakpoints.end());
    enc.values.assign(values.begin(), values.end());
    enc.x_col = x_col;
    enc.y_col = y_col;

    const int K = static_cast<int>(breakpoints.size()) - 1;  // segments
    for (int k = 0; k < K; ++k) {
        enc.fill_cols.push_back(lp.add_col(0.0, 0.0, 1.0));
        int z = lp.add_col(0.0, 0.0, 1.0);
        enc.segment_bins.push_back(z);
        mip.binaries.push_back(z);
    }

    // x link:  x - sum dx_k fill_k = x_0
    int rx = lp.add_row(RowSense::EQ, breakpoints[0]);
    lp.add_term(rx, x_col, 1.0);
    for (int k = 0; k < K; ++k)
        lp.add_term(rx, enc.fill_cols[k], -(breakpoints[k + 1] - breakpoints[k]));
    enc.rows.push_back(rx);

    // y link:  y - sum df_k fill_k = f_0
    int ry = lp.add_row(RowSense::EQ, values[0]);
    lp.add_term(ry, y_col, 1.0);
    for (int k = 0; k < K; ++k)
        lp.add_term(ry, enc.fill_cols[k], -(values[k + 1] - values[k]));
    enc.rows.push_back(ry);

    // prefix ordering:  z_k <= fill_k,  fill_{k+1} <= z_k
    for (int k = 0; k < K; ++k) {
        int r1 = lp.add_row(RowSense::LE, 0.0);
        lp.add_term(r1, enc.segment_bins[k], 1.0);
        lp.add_term(r1, enc.fill_cols[k], -1.0);
        enc.rows.push_back(r1);
        if (k + 1 < K) {
            int r2 = lp.add_row(RowSense::LE, 0.0);
            lp.add_term(r2, enc.fill_cols[k + 1], 1.0);
            lp.add_term(r2, enc.segment_bins[k], -1.0);
            enc.rows.push_back(r2);
        }
    }
    return enc;
}

double pwl_interpolate(std::span<const double> xs, std::span<const double> fs,
                       double x) {
    const size_t n = xs.size();
    if (x <= xs[0]) return fs[0];
    if (x >= xs[n - 1]) return fs[n - 1];
    for (size_t k = 1; k < n; ++k) {
        if (x <= xs[k]) {
            double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            return fs[k - 1] + t * (fs[k] - fs[k - 1]);
        }
    }
    return fs[n - 1];
}

OaCut oa_refine(double a, double b, double c, double p_bar) {
    if (!(a > 0)) throw std::invalid_argument("oa_refine: requires a > 0");
    return {2.0 * a * p_bar + b, c - a * p_bar * p_bar};
}

}  // namespace iegs
