#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "iegs/lp.hpp"
#include "iegs/mip.hpp"
#include "iegs/pwl.hpp"
#include "iegs/simplex.hpp"
#include "support/lp_oracle.hpp"

using namespace iegs;

namespace {

// Dual objective for min c'x, single-sense rows, box bounds. Certifies strong
// duality without going through the solver's own bookkeeping.
double dual_objective(const LinearProgram& lp, const LpSolution& s) {
    double d = 0.0;
    for (int i = 0; i < lp.n_rows(); ++i) d += s.row_dual[i] * lp.rhs[i];
    for (int j = 0; j < lp.n_cols; ++j) {
        double rc = s.reduced_cost[j];
        if (std::fabs(rc) <= 1e-9 * (1.0 + std::fabs(lp.obj[j]))) continue;
        d += rc * (rc > 0 ? lp.col_lb[j] : lp.col_ub[j]);
    }
    return d;
}

LinearProgram random_lp(std::mt19937& rng, bool boxed = true) {
    std::uniform_int_distribution<int> size(2, 7);
    std::uniform_real_distribution<double> coef(-4.0, 4.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int n = size(rng), m = size(rng);
    LinearProgram lp;
    std::vector<double> x0;
    for (int j = 0; j < n; ++j) {
        double lb = 0.0;
        double ub = boxed || unit(rng) < 0.7 ? 10.0 * unit(rng) + 0.5 : kInf;
        lp.add_col(coef(rng), lb, ub);
        x0.push_back(ub < kInf ? ub * unit(rng) : 5.0 * unit(rng));
    }
    for (int i = 0; i < m; ++i) {
        double act = 0.0;
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < n; ++j) {
            if (unit(rng) < 0.6) {
                double v = coef(rng);
                if (v != 0.0) {
                    terms.push_back({j, v});
                    act += v * x0[j];
                }
            }
        }
        double u = unit(rng);
        RowSense sn = u < 0.45 ? RowSense::LE : (u < 0.9 ? RowSense::GE : RowSense::EQ);
        double margin = unit(rng);
        double rhs = sn == RowSense::LE ? act + margin : sn == RowSense::GE ? act - margin : act;
        int r = lp.add_row(sn, rhs);
        for (auto [c, v] : terms) lp.add_term(r, c, v);
    }
    return lp;
}

}  // namespace

TEST_CASE("lower-bound row: min x s.t. x >= 3") {
    LinearProgram lp;
    int x = lp.add_col(1.0, -kInf, kInf);
    lp.add_row(RowSense::GE, 3.0, {{x, 1.0}});
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[x] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(s.obj == doctest::Approx(3.0));
    CHECK(s.row_dual[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible box vs row") {
    LinearProgram lp;
    int x = lp.add_col(0.0, 0.0, kInf);
    lp.add_row(RowSense::LE, -1.0, {{x, 1.0}});
    auto s = solve_lp(lp);
    CHECK(s.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded detection") {
    LinearProgram lp;
    int x = lp.add_col(-1.0, 0.0, kInf);
    (void)x;
    auto s = solve_lp(lp);
    CHECK(s.status == LpStatus::Unbounded);
}

TEST_CASE("equality with slack pair: min L1+L2 s.t. L1-L2=21") {
    LinearProgram lp;
    int l1 = lp.add_col(1.0, 0.0, kInf);
    int l2 = lp.add_col(1.0, 0.0, kInf);
    int r = lp.add_row(RowSense::EQ, 21.0, {{l1, 1.0}, {l2, -1.0}});
    auto oracle = testsupport::enumerate_lp(lp);
    REQUIRE(oracle.has_value());
    CHECK(*oracle == doctest::Approx(21.0));
    double fd = testsupport::fd_row_dual(lp, r);
    CHECK(fd == doctest::Approx(1.0).epsilon(1e-4));

    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.obj == doctest::Approx(21.0));
    CHECK(s.row_dual[r] == doctest::Approx(1.0));
}

TEST_CASE("strong duality and oracle agreement on random LPs") {
    std::mt19937 rng(20240811);
    int solved = 0;
    for (int t = 0; t < 60; ++t) {
        LinearProgram lp = random_lp(rng);
        auto s = solve_lp(lp);
        auto oracle = testsupport::enumerate_lp(lp);
        REQUIRE(oracle.has_value());  // constructed feasible
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.obj == doctest::Approx(*oracle).epsilon(1e-7));
        double d = dual_objective(lp, s);
        CHECK(std::fabs(s.obj - d) <= 1e-8 * (1.0 + std::fabs(s.obj)));
        solved++;
    }
    CHECK(solved == 60);
}

TEST_CASE("dual values match rhs perturbation on nondegenerate LPs") {
    std::mt19937 rng(77);
    int tested = 0;
    for (int t = 0; t < 200 && tested < 25; ++t) {
        LinearProgram lp = random_lp(rng);
        auto s = solve_lp(lp);
        if (s.status != LpStatus::Optimal) continue;
        // strict-complementarity screen: skip plausibly degenerate instances
        bool degen = false;
        for (int j = 0; j < lp.n_cols && !degen; ++j) {
            bool at_bound = (lp.col_lb[j] > -kInf && std::fabs(s.x[j] - lp.col_lb[j]) < 1e-7) ||
                            (lp.col_ub[j] < kInf && std::fabs(s.x[j] - lp.col_ub[j]) < 1e-7);
            if (at_bound && std::fabs(s.reduced_cost[j]) < 1e-7) degen = true;
        }
        std::vector<std::vector<std::pair<int, double>>> rows(lp.n_rows());
        for (const auto& e : lp.elems) rows[e.row].push_back({e.col, e.val});
        for (int i = 0; i < lp.n_rows() && !degen; ++i) {
            double act = 0.0;
            for (auto [c, v] : rows[i]) act += v * s.x[c];
            bool tight = std::fabs(act - lp.rhs[i]) < 1e-7;
            if (lp.sense[i] != RowSense::EQ && tight && std::fabs(s.row_dual[i]) < 1e-7)
                degen = true;
        }
        if (degen) continue;

        std::uniform_int_distribution<int> pick(0, lp.n_rows() - 1);
        int r = pick(rng);
        const double delta = 1e-6;
        LinearProgram lp2 = lp;
        lp2.rhs[r] += delta;
        auto s2 = solve_lp(lp2);
        if (s2.status != LpStatus::Optimal) continue;
        CHECK(std::fabs((s2.obj - s.obj) - s.row_dual[r] * delta) <= 1e-6);
        tested++;
    }
    CHECK(tested >= 20);
}

TEST_CASE("mip without binaries equals lp") {
    LinearProgram lp;
    int x = lp.add_col(2.0, 0.0, 10.0);
    int y = lp.add_col(-1.0, 0.0, 4.0);
    lp.add_row(RowSense::LE, 6.0, {{x, 1.0}, {y, 1.0}});
    MixedIntegerProgram mip{lp, {}};
    auto lr = solve_lp(lp);
    auto mr = solve_mip(mip);
    REQUIRE(mr.sol.status == LpStatus::Optimal);
    CHECK(mr.sol.obj == doctest::Approx(lr.obj));
    CHECK(mr.nodes <= 1);
}

TEST_CASE("fractional capacity forces rounding: max x1+x2 <= 1.5") {
    LinearProgram lp;
    int a = lp.add_col(-1.0, 0.0, 1.0);
    int b = lp.add_col(-1.0, 0.0, 1.0);
    lp.add_row(RowSense::LE, 1.5, {{a, 1.0}, {b, 1.0}});
    MixedIntegerProgram mip{lp, {a, b}};
    MipOptions opt;
    opt.rel_gap = 0.0;
    auto r = solve_mip(mip, opt);
    REQUIRE(r.sol.status == LpStatus::Optimal);
    CHECK(r.sol.obj == doctest::Approx(-1.0));
}

TEST_CASE("small knapsack against exhaustive enumeration") {
    // max 5a+4b+3c st 4a+3b+2c <= 5; enumeration over the 8 assignments
    double best = -kInf;
    for (int mask = 0; mask < 8; ++mask) {
        double a = mask & 1, b = (mask >> 1) & 1, c = (mask >> 2) & 1;
        if (4 * a + 3 * b + 2 * c <= 5.0) best = std::max(best, 5 * a + 4 * b + 3 * c);
    }
    CHECK(best == doctest::Approx(7.0));  // b = c = 1

    LinearProgram lp;
    int a = lp.add_col(-5.0, 0.0, 1.0);
    int b = lp.add_col(-4.0, 0.0, 1.0);
    int c = lp.add_col(-3.0, 0.0, 1.0);
    lp.add_row(RowSense::LE, 5.0, {{a, 4.0}, {b, 3.0}, {c, 2.0}});
    MipOptions opt;
    opt.rel_gap = 0.0;
    auto r = solve_mip({lp, {a, b, c}}, opt);
    REQUIRE(r.sol.status == LpStatus::Optimal);
    CHECK(-r.sol.obj == doctest::Approx(best));
    CHECK(r.sol.x[b] == doctest::Approx(1.0));
    CHECK(r.sol.x[c] == doctest::Approx(1.0));
}

TEST_CASE("branch and bound equals enumeration on random binary programs") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> nb(3, 10);
    std::uniform_int_distribution<int> nr(1, 5);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        int n = nb(rng), m = nr(rng);
        LinearProgram lp;
        for (int j = 0; j < n; ++j) lp.add_col(coef(rng), 0.0, 1.0);
        std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
        for (int i = 0; i < m; ++i) {
            int r = lp.add_row(unit(rng) < 0.7 ? RowSense::LE : RowSense::GE, 0.0);
            for (int j = 0; j < n; ++j)
                if (unit(rng) < 0.6) {
                    A[i][j] = coef(rng);
                    lp.add_term(r, j, A[i][j]);
                }
            // rhs keeps at least the all-zero point feasible for LE (and GE needs <=0)
            lp.rhs[r] = lp.sense[r] == RowSense::LE ? std::fabs(coef(rng)) : -std::fabs(coef(rng));
        }
        double best = kInf;
        for (int mask = 0; mask < (1 << n); ++mask) {
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                double act = 0.0;
                for (int j = 0; j < n; ++j)
                    if (mask & (1 << j)) act += A[i][j];
                ok = lp.sense[i] == RowSense::LE ? act <= lp.rhs[i] + 1e-9
                                                 : act >= lp.rhs[i] - 1e-9;
            }
            if (!ok) continue;
            double obj = 0.0;
            for (int j = 0; j < n; ++j)
                if (mask & (1 << j)) obj += lp.obj[j];
            best = std::min(best, obj);
        }
        std::vector<int> bins(n);
        for (int j = 0; j < n; ++j) bins[j] = j;
        MipOptions opt;
        opt.rel_gap = 0.0;
        auto r = solve_mip({lp, bins}, opt);
        REQUIRE(r.sol.status == LpStatus::Optimal);
        CHECK(r.sol.obj == doctest::Approx(best).epsilon(1e-7));
    }
}

TEST_CASE("pwl encoding of x|x| reproduces breakpoints and interpolates") {
    const std::vector<double> xs = {-10, -5, 0, 5, 10};
    std::vector<double> fs;
    for (double v : xs) fs.push_back(v * std::fabs(v));

    auto eval_at = [&](double xfix, bool maximize) {
        MixedIntegerProgram mip;
        int x = mip.lp.add_col(0.0, xfix, xfix);
        int y = mip.lp.add_col(maximize ? -1.0 : 1.0, -kInf, kInf);
        encode_pwl(mip, x, y, xs, fs);
        MipOptions opt;
        opt.rel_gap = 0.0;
        auto r = solve_mip(mip, opt);
        REQUIRE(r.sol.status == LpStatus::Optimal);
        return r.sol.x[y];
    };

    CHECK(eval_at(5.0, false) == doctest::Approx(25.0).epsilon(1e-9));
    CHECK(eval_at(5.0, true) == doctest::Approx(25.0).epsilon(1e-9));
    // interpolant between (0,0) and (5,25): 12.5 at 2.5; true value 6.25
    CHECK(eval_at(2.5, false) == doctest::Approx(12.5).epsilon(1e-9));
    CHECK(eval_at(2.5, true) == doctest::Approx(12.5).epsilon(1e-9));
    CHECK(pwl_interpolate(xs, fs, 2.5) == doctest::Approx(12.5));
}

TEST_CASE("pwl of affine function is exact everywhere") {
    const std::vector<double> xs = {-3, -1, 2, 4, 7};
    std::vector<double> fs;
    for (double v : xs) fs.push_back(2.5 * v - 1.0);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 7.0);
    for (int t = 0; t < 10; ++t) {
        double p = u(rng);
        MixedIntegerProgram mip;
        int x = mip.lp.add_col(0.0, p, p);
        int y = mip.lp.add_col(1.0, -kInf, kInf);
        encode_pwl(mip, x, y, xs, fs);
        auto r = solve_mip(mip);
        REQUIRE(r.sol.status == LpStatus::Optimal);
        CHECK(r.sol.x[y] == doctest::Approx(2.5 * p - 1.0).epsilon(1e-9));
    }
}

TEST_CASE("pwl rejects non-monotone breakpoints") {
    MixedIntegerProgram mip;
    int x = mip.lp.add_col(0.0, 0.0, 1.0);
    int y = mip.lp.add_col(0.0, -kInf, kInf);
    std::vector<double> xs = {0.0, 1.0, 1.0};
    std::vector<double> fs = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(encode_pwl(mip, x, y, xs, fs), std::invalid_argument);
}

TEST_CASE("outer approximation cuts of a quadratic epigraph") {
    auto c0 = oa_refine(1.0, 0.0, 0.0, 0.0);
    CHECK(c0.slope == doctest::Approx(0.0));
    CHECK(c0.offset == doctest::Approx(0.0));

    auto c2 = oa_refine(1.0, 0.0, 0.0, 2.0);
    CHECK(c2.slope == doctest::Approx(4.0));
    CHECK(c2.offset == doctest::Approx(-4.0));
    CHECK(c2.slope * 2.0 + c2.offset == doctest::Approx(4.0));  // tangency

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int t = 0; t < 20; ++t) {
        double a = std::fabs(u(rng)) / 10 + 0.01, b = u(rng), c = u(rng);
        double pbar = u(rng);
        auto cut = oa_refine(a, b, c, pbar);
        CHECK(cut.slope * pbar + cut.offset ==
              doctest::Approx(a * pbar * pbar + b * pbar + c).epsilon(1e-12));
        for (int k = 0; k < 1000; ++k) {
            double p = u(rng);
            CHECK(cut.slope * p + cut.offset <= a * p * p + b * p + c + 1e-9);
        }
    }
}

TEST_CASE("lp debug dump lists rows, bounds and binaries") {
    LinearProgram lp;
    int x = lp.add_col(1.0, 0.0, 1.0);
    lp.add_row(RowSense::LE, 2.0, {{x, 3.0}});
    std::ostringstream os;
    std::vector<int> bins = {x};
    dump_lp(lp, os, &bins);
    auto text = os.str();
    CHECK(text.find("minimize") != std::string::npos);
    CHECK(text.find("3 x0 <= 2") != std::string::npos);
    CHECK(text.find("binaries") != std::string::npos);
}
