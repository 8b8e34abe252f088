#include "iegs/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace iegs {

namespace {

// Internal form: every row i becomes  a_i.x - y_i = 0  with a logical column
// y_i carrying the row bounds. The working basis is indexed by row; its
// inverse is kept in product form on top of a fresh factorization.

struct Eta {
    int pivot_row;
    double pivot_val;
    int begin, end;  // slice into shared entry pool
};

struct EtaEntry {
    int row;
    double val;
};

class Kernel {
  public:
    Kernel(const LinearProgram& lp, const SimplexOptions& opt) : opt_(opt) {
        build(lp);
    }

    LpSolution run(BasisState* warm);
    LpSolveStats stats;

  private:
    const SimplexOptions& opt_;
    int m_ = 0;       // rows
    int nstr_ = 0;    // structural columns
    int ntot_ = 0;    // structural + logical
    // CSC, equilibrated
    std::vector<int> cstart_;
    std::vector<int> crow_;
    std::vector<double> cval_;
    std::vector<double> cost_, lb_, ub_;
    std::vector<double> rowscale_, colscale_;
    std::vector<double> rhs_orig_;  // unscaled rhs per row (for reporting)

    // state
    std::vector<uint8_t> vstat_;
    std::vector<int> basis_;       // basis_[r] = column pivoted at row r
    std::vector<int> basis_pos_;   // basis_pos_[col] = row, or -1
    std::vector<double> x_;        // current values, scaled space

    // factorization (product form)
    std::vector<Eta> etas_;
    std::vector<EtaEntry> epool_;
    int factor_etas_ = 0;  // etas belonging to the base factorization

    // work arrays
    std::vector<double> work_;
    std::vector<char> mark_;
    std::vector<double> pi_;
    std::vector<double> kcost_;  // phase-1 composite costs for basics

    long iters_ = 0;
    long max_iters_ = 0;
    int degen_streak_ = 0;
    bool bland_ = false;
    bool factor_repaired_ = false;  // last factorize() altered the basis

    void build(const LinearProgram& lp);
    void equilibrate(std::vector<LinearProgram::Elem>& elems);
    bool factorize();           // rebuilds etas_ from basis_; repairs if singular
    void ftran(std::vector<double>& g, std::vector<int>& tlist) const;
    // ftran may report a row twice when a value cancels to exactly zero and
    // is later refilled; callers doing arithmetic over the list need this
    void dedupe(std::vector<int>& tl);
    void btran(std::vector<double>& g) const;
    void compute_basics();      // x_B from nonbasic values
    double infeasibility(double* maxviol = nullptr) const;
    void composite_costs();
    // returns entering column or -1; dir receives +-1
    int price(bool phase1, int* dir);
    // performs one iteration; returns 0 ok, 1 optimal/no-entering handled by
    // caller, 2 unbounded, 3 numerical failure
    int step(int q, int dir, bool phase1);
    double dual_infeas_cost(int j, const std::vector<double>& pi) const;

    LpSolution finish(LpStatus st, BasisState* warm);
};

void Kernel::build(const LinearProgram& lp) {
    lp.validate();
    m_ = lp.n_rows();
    nstr_ = lp.n_cols;
    ntot_ = nstr_ + m_;

    std::vector<LinearProgram::Elem> elems = lp.elems;
    // merge duplicates
    std::sort(elems.begin(), elems.end(), [](const auto& a, const auto& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    std::vector<LinearProgram::Elem> merged;
    merged.reserve(elems.size());
    for (const auto& e : elems) {
        if (!merged.empty() && merged.back().col == e.col && merged.back().row == e.row)
            merged.back().val += e.val;
        else
            merged.push_back(e);
    }
    elems.swap(merged);

    rowscale_.assign(m_, 1.0);
    colscale_.assign(nstr_, 1.0);
    if (opt_.scale) equilibrate(elems);

    cstart_.assign(ntot_ + 1, 0);
    for (const auto& e : elems) cstart_[e.col + 1]++;
    for (int j = nstr_; j < ntot_; ++j) cstart_[j + 1] = 1;  // logicals
    for (int j = 0; j < ntot_; ++j) cstart_[j + 1] += cstart_[j];
    crow_.resize(cstart_[ntot_]);
    cval_.resize(cstart_[ntot_]);
    {
        std::vector<int> fill(cstart_.begin(), cstart_.end() - 1);
        for (const auto& e : elems) {
            int p = fill[e.col]++;
            crow_[p] = e.row;
            cval_[p] = e.val * rowscale_[e.row] * colscale_[e.col];
        }
        for (int i = 0; i < m_; ++i) {
            int p = fill[nstr_ + i]++;
            crow_[p] = i;
            cval_[p] = -1.0;
        }
    }

    cost_.assign(ntot_, 0.0);
    lb_.assign(ntot_, 0.0);
    ub_.assign(ntot_, 0.0);
    for (int j = 0; j < nstr_; ++j) {
        cost_[j] = lp.obj[j] * colscale_[j];
        lb_[j] = lp.col_lb[j] / colscale_[j];
        ub_[j] = lp.col_ub[j] / colscale_[j];
    }
    rhs_orig_ = lp.rhs;
    for (int i = 0; i < m_; ++i) {
        double r = lp.rhs[i] * rowscale_[i];
        switch (lp.sense[i]) {
            case RowSense::LE: lb_[nstr_ + i] = -kInf; ub_[nstr_ + i] = r; break;
            case RowSense::GE: lb_[nstr_ + i] = r; ub_[nstr_ + i] = kInf; break;
            case RowSense::EQ: lb_[nstr_ + i] = r; ub_[nstr_ + i] = r; break;
        }
    }

    work_.assign(m_, 0.0);
    mark_.assign(m_, 0);
    pi_.assign(m_, 0.0);
    kcost_.assign(m_, 0.0);
    x_.assign(ntot_, 0.0);
    max_iters_ = opt_.max_iters > 0 ? opt_.max_iters : 50000 + 60L * m_;
}

void Kernel::equilibrate(std::vector<LinearProgram::Elem>& elems) {
    // max-norm equilibration, scales rounded to powers of two
    auto pow2 = [](double v) {
        if (v <= 0.0 || !std::isfinite(v)) return 1.0;
        return std::exp2(std::round(std::log2(v)));
    };
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> rmax(m_, 0.0);
        for (const auto& e : elems) {
            double a = std::fabs(e.val) * rowscale_[e.row] * colscale_[e.col];
            rmax[e.row] = std::max(rmax[e.row], a);
        }
        for (int i = 0; i < m_; ++i)
            if (rmax[i] > 0) rowscale_[i] = pow2(rowscale_[i] / rmax[i]) ;
        std::vector<double> cmax(nstr_, 0.0);
        for (const auto& e : elems) {
            double a = std::fabs(e.val) * rowscale_[e.row] * colscale_[e.col];
            cmax[e.col] = std::max(cmax[e.col], a);
        }
        for (int j = 0; j < nstr_; ++j)
            if (cmax[j] > 0) colscale_[j] = pow2(colscale_[j] / cmax[j]);
    }
}

bool Kernel::factorize() {
    stats.refactorizations++;
    factor_repaired_ = false;
    etas_.clear();
    epool_.clear();
    factor_etas_ = 0;

    std::vector<char> row_pivoted(m_, 0);
    std::vector<int> col_of_row(m_, -1);  // pivot assignment
    // process shortest columns first; logicals are singletons and go first
    std::vector<int> order(m_);
    for (int r = 0; r < m_; ++r) order[r] = r;
    std::vector<int> nnz(m_);
    for (int r = 0; r < m_; ++r) nnz[r] = cstart_[basis_[r] + 1] - cstart_[basis_[r]];
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return nnz[a] < nnz[b]; });

    std::vector<double> g(m_, 0.0);
    std::vector<int> tl;
    std::vector<int> new_basis(m_, -1);
    std::vector<int> dropped;

    for (int oi = 0; oi < m_; ++oi) {
        int c = basis_[order[oi]];
        // transformed column
        tl.clear();
        for (int p = cstart_[c]; p < cstart_[c + 1]; ++p) {
            g[crow_[p]] = cval_[p];
            tl.push_back(crow_[p]);
        }
        ftran(g, tl);
        dedupe(tl);
        // pick pivot among unpivoted rows
        int prow = -1;
        double pbest = 0.0;
        for (int r : tl) {
            if (row_pivoted[r]) continue;
            double a = std::fabs(g[r]);
            if (a > pbest) { pbest = a; prow = r; }
        }
        if (prow < 0 || pbest < 1e-11) {
            dropped.push_back(c);
            for (int r : tl) g[r] = 0.0;
            continue;
        }
        Eta e;
        e.pivot_row = prow;
        e.pivot_val = g[prow];
        e.begin = static_cast<int>(epool_.size());
        for (int r : tl) {
            if (r != prow && g[r] != 0.0) {
                if (std::fabs(g[r]) > 1e-13) epool_.push_back({r, g[r]});
            }
            // cleared below
        }
        e.end = static_cast<int>(epool_.size());
        etas_.push_back(e);
        row_pivoted[prow] = 1;
        new_basis[prow] = c;
        for (int r : tl) g[r] = 0.0;
    }

    // repair: unpivoted rows take their logical column
    for (int r = 0; r < m_; ++r) {
        if (row_pivoted[r]) continue;
        factor_repaired_ = true;
        int c = nstr_ + r;
        Eta e;
        e.pivot_row = r;
        e.pivot_val = -1.0;  // logical coefficient
        e.begin = e.end = static_cast<int>(epool_.size());
        etas_.push_back(e);
        new_basis[r] = c;
        row_pivoted[r] = 1;
        vstat_[c] = kBasic;
    }
    for (int c : dropped) {
        // kicked out of the basis, park at a finite bound
        if (lb_[c] > -kInf)
            { vstat_[c] = kAtLb; x_[c] = lb_[c]; }
        else if (ub_[c] < kInf)
            { vstat_[c] = kAtUb; x_[c] = ub_[c]; }
        else
            { vstat_[c] = kFreeNb; x_[c] = 0.0; }
    }
    basis_ = new_basis;
    basis_pos_.assign(ntot_, -1);
    for (int r = 0; r < m_; ++r) basis_pos_[basis_[r]] = r;
    factor_etas_ = static_cast<int>(etas_.size());
    return true;
}

void Kernel::ftran(std::vector<double>& g, std::vector<int>& tl) const {
    for (const Eta& e : etas_) {
        double gr = g[e.pivot_row];
        if (gr == 0.0) continue;
        double t = gr / e.pivot_val;
        g[e.pivot_row] = t;
        for (int p = e.begin; p < e.end; ++p) {
            const EtaEntry& en = epool_[p];
            if (g[en.row] == 0.0 && t != 0.0) tl.push_back(en.row);
            g[en.row] -= en.val * t;
        }
    }
}

void Kernel::dedupe(std::vector<int>& tl) {
    size_t w = 0;
    for (int r : tl) {
        if (mark_[r]) continue;
        mark_[r] = 1;
        tl[w++] = r;
    }
    tl.resize(w);
    for (int r : tl) mark_[r] = 0;
}

void Kernel::btran(std::vector<double>& g) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        const Eta& e = *it;
        double acc = g[e.pivot_row];
        for (int p = e.begin; p < e.end; ++p) acc -= epool_[p].val * g[epool_[p].row];
        g[e.pivot_row] = acc / e.pivot_val;
    }
}

void Kernel::compute_basics() {
    std::fill(work_.begin(), work_.end(), 0.0);
    std::vector<int> tl;
    for (int j = 0; j < ntot_; ++j) {
        if (vstat_[j] == kBasic) continue;
        double v = x_[j];
        if (v == 0.0) continue;
        for (int p = cstart_[j]; p < cstart_[j + 1]; ++p) {
            if (work_[crow_[p]] == 0.0) tl.push_back(crow_[p]);
            work_[crow_[p]] -= cval_[p] * v;
        }
    }
    ftran(work_, tl);
    for (int r = 0; r < m_; ++r) {
        x_[basis_[r]] = work_[r];
        work_[r] = 0.0;
    }
}

double Kernel::infeasibility(double* maxviol) const {
    double total = 0.0, mv = 0.0;
    for (int r = 0; r < m_; ++r) {
        int c = basis_[r];
        double v = x_[c];
        double viol = 0.0;
        if (v < lb_[c]) viol = lb_[c] - v;
        else if (v > ub_[c]) viol = v - ub_[c];
        total += viol;
        mv = std::max(mv, viol);
    }
    if (maxviol) *maxviol = mv;
    return total;
}

void Kernel::composite_costs() {
    const double tol = opt_.feas_tol;
    for (int r = 0; r < m_; ++r) {
        int c = basis_[r];
        double v = x_[c];
        if (v < lb_[c] - tol) kcost_[r] = -1.0;
        else if (v > ub_[c] + tol) kcost_[r] = 1.0;
        else kcost_[r] = 0.0;
    }
}

int Kernel::price(bool phase1, int* dir) {
    // pi = B^-T c_B
    for (int r = 0; r < m_; ++r)
        pi_[r] = phase1 ? kcost_[r] : cost_[basis_[r]];
    btran(pi_);

    const double dtol = opt_.dual_tol;
    int best = -1, bdir = 0;
    double bscore = dtol;
    for (int j = 0; j < ntot_; ++j) {
        uint8_t st = vstat_[j];
        if (st == kBasic) continue;
        double d = phase1 ? 0.0 : cost_[j];
        for (int p = cstart_[j]; p < cstart_[j + 1]; ++p)
            d -= pi_[crow_[p]] * cval_[p];
        // candidate directions
        double score = 0.0;
        int dr = 0;
        if (st == kAtLb || (st == kFreeNb && d < 0)) {
            if (d < -dtol) { score = -d; dr = 1; }
        }
        if (st == kAtUb || (st == kFreeNb && d > 0)) {
            if (d > dtol && d > score) { score = d; dr = -1; }
        }
        if (dr == 0) continue;
        if (bland_) { *dir = dr; return j; }  // least index
        if (score > bscore) { bscore = score; best = j; bdir = dr; }
    }
    *dir = bdir;
    return best;
}

int Kernel::step(int q, int dir, bool phase1) {
    // w = B^-1 A_q
    std::vector<int> tl;
    for (int p = cstart_[q]; p < cstart_[q + 1]; ++p) {
        work_[crow_[p]] = cval_[p];
        tl.push_back(crow_[p]);
    }
    ftran(work_, tl);
    dedupe(tl);

    const double ptol = opt_.pivot_tol;
    const double ftol = opt_.feas_tol;
    double best_delta = kInf;
    int leave_row = -1;
    double leave_pivot = 0.0;
    int leave_to = 0;  // 0: ratio target is the moving bound
    // entering variable's own range (bound flip)
    double self_range = (lb_[q] > -kInf && ub_[q] < kInf) ? ub_[q] - lb_[q] : kInf;
    if (vstat_[q] == kFreeNb) self_range = kInf;

    for (int r : tl) {
        double w = work_[r];
        if (std::fabs(w) < ptol) continue;
        int c = basis_[r];
        double rate = -dir * w;  // d x_c / d step
        double v = x_[c];
        double target;
        if (rate > 0) {
            if (phase1 && v < lb_[c] - ftol) target = lb_[c];  // gains feasibility, stop at lb
            else if (phase1 && v > ub_[c] + ftol) continue;    // worsens, priced into the gradient
            else if (ub_[c] < kInf) target = ub_[c];
            else continue;
        } else {
            if (phase1 && v > ub_[c] + ftol) target = ub_[c];
            else if (phase1 && v < lb_[c] - ftol) continue;
            else if (lb_[c] > -kInf) target = lb_[c];
            else continue;
        }
        double delta = (target - v) / rate;
        if (delta < 0) delta = 0;  // small violations give tiny negatives
        if (delta < best_delta - 1e-12 ||
            (delta < best_delta + 1e-12 &&
             (leave_row < 0 ||
              (bland_ ? basis_[r] < basis_[leave_row]
                      : std::fabs(w) > std::fabs(leave_pivot))))) {
            best_delta = delta;
            leave_row = r;
            leave_pivot = w;
            leave_to = (rate > 0) ? 1 : 0;  // 1: hits upper target
        }
    }

    bool flip = self_range < best_delta;
    if (leave_row < 0 && !flip) {
        for (int r : tl) work_[r] = 0.0;
        return phase1 ? 3 : 2;  // unbounded (phase1: numerical trouble)
    }

    double delta = flip ? self_range : best_delta;
    if (delta > 1e-12) degen_streak_ = 0; else degen_streak_++;
    if (degen_streak_ > opt_.bland_streak) bland_ = true;
    else if (delta > 1e-12) bland_ = false;

    // move basics
    if (delta != 0.0) {
        for (int r : tl) {
            if (work_[r] == 0.0) continue;
            x_[basis_[r]] -= dir * delta * work_[r];
        }
        x_[q] += dir * delta;
    }

    if (flip) {
        vstat_[q] = (vstat_[q] == kAtLb) ? kAtUb : kAtLb;
        x_[q] = (vstat_[q] == kAtLb) ? lb_[q] : ub_[q];
        for (int r : tl) work_[r] = 0.0;
        return 0;
    }

    // pivot: q enters at leave_row, old basic leaves to its nearest bound
    (void)leave_to;
    int c_out = basis_[leave_row];
    double vout = x_[c_out];
    // snap exactly to the bound it hit
    double dl = lb_[c_out] > -kInf ? std::fabs(vout - lb_[c_out]) : kInf;
    double du = ub_[c_out] < kInf ? std::fabs(vout - ub_[c_out]) : kInf;
    if (dl <= du) { vstat_[c_out] = kAtLb; x_[c_out] = lb_[c_out]; }
    else { vstat_[c_out] = kAtUb; x_[c_out] = ub_[c_out]; }
    if (lb_[c_out] == -kInf && ub_[c_out] == kInf) { vstat_[c_out] = kFreeNb; x_[c_out] = 0.0; }

    Eta e;
    e.pivot_row = leave_row;
    e.pivot_val = work_[leave_row];
    e.begin = static_cast<int>(epool_.size());
    for (int r : tl) {
        if (r != leave_row && work_[r] != 0.0 && std::fabs(work_[r]) > 1e-13)
            epool_.push_back({r, work_[r]});
    }
    e.end = static_cast<int>(epool_.size());
    etas_.push_back(e);

    basis_pos_[c_out] = -1;
    basis_[leave_row] = q;
    basis_pos_[q] = leave_row;
    vstat_[q] = kBasic;

    for (int r : tl) work_[r] = 0.0;

    if (static_cast<int>(etas_.size()) - factor_etas_ >= opt_.refactor_interval) {
        factorize();
        compute_basics();
    }
    return 0;
}

LpSolution Kernel::run(BasisState* warm) {
    // initial point
    vstat_.assign(ntot_, kAtLb);
    bool warm_ok = false;
    if (warm && static_cast<int>(warm->size()) == ntot_) {
        int nb = 0;
        for (int j = 0; j < ntot_; ++j)
            if ((*warm)[j] == kBasic) nb++;
        if (nb == m_) {
            vstat_ = *warm;
            warm_ok = true;
        }
    }
    if (!warm_ok) {
        for (int j = 0; j < nstr_; ++j) {
            if (lb_[j] > -kInf) vstat_[j] = kAtLb;
            else if (ub_[j] < kInf) vstat_[j] = kAtUb;
            else vstat_[j] = kFreeNb;
        }
        for (int i = 0; i < m_; ++i) vstat_[nstr_ + i] = kBasic;
    }
    basis_.assign(m_, -1);
    {
        int r = 0;
        for (int j = 0; j < ntot_ && r < m_; ++j)
            if (vstat_[j] == kBasic) basis_[r++] = j;
        // factorize() reassigns pivot rows, the initial order is irrelevant
    }
    for (int j = 0; j < ntot_; ++j) {
        switch (vstat_[j]) {
            case kAtLb: x_[j] = lb_[j] > -kInf ? lb_[j] : 0.0; break;
            case kAtUb: x_[j] = ub_[j] < kInf ? ub_[j] : 0.0; break;
            case kFreeNb: x_[j] = 0.0; break;
            default: break;
        }
    }
    factorize();
    compute_basics();

    // ---- phase 1
    int p1_iters = 0;
    while (true) {
        if (infeasibility() <= 1e-7) break;
        if (iters_++ > max_iters_) return finish(LpStatus::IterLimit, warm);
        composite_costs();
        int dir;
        int q = price(true, &dir);
        if (q < 0) {
            // locally optimal composite objective, still infeasible
            if (!bland_) { bland_ = true; continue; }
            return finish(LpStatus::Infeasible, warm);
        }
        int rc = step(q, dir, true);
        p1_iters++;
        if (rc == 2 || rc == 3) {
            // ray in phase 1 means numerical trouble
            return finish(LpStatus::NumFail, warm);
        }
    }
    stats.phase1_iterations += p1_iters;
    bland_ = false;
    degen_streak_ = 0;

    // ---- phase 2
    while (true) {
        if (iters_++ > max_iters_) return finish(LpStatus::IterLimit, warm);
        int dir;
        int q = price(false, &dir);
        if (q < 0) {
            // optimal; polish with a fresh factorization
            factorize();
            compute_basics();
            if (factor_repaired_) continue;  // basis changed, price again
            if (infeasibility() > 1e-7) {
                // numerical drift: repair feasibility, then resume phase 2
                int guard = 0;
                while (infeasibility() > 1e-7 && guard++ < m_ + 1000) {
                    composite_costs();
                    int d2, q2 = price(true, &d2);
                    if (q2 < 0) break;
                    if (step(q2, d2, true) != 0) break;
                }
                if (infeasibility() > 1e-6) return finish(LpStatus::NumFail, warm);
                continue;
            }
            return finish(LpStatus::Optimal, warm);
        }
        int rc = step(q, dir, false);
        if (rc == 2) return finish(LpStatus::Unbounded, warm);
        if (rc == 3) return finish(LpStatus::NumFail, warm);
    }
}

LpSolution Kernel::finish(LpStatus st, BasisState* warm) {
    stats.iterations = iters_;
    LpSolution out;
    out.status = st;
    if (warm) *warm = vstat_;
    if (st != LpStatus::Optimal && st != LpStatus::IterLimit) return out;

    out.x.assign(nstr_, 0.0);
    for (int j = 0; j < nstr_; ++j) out.x[j] = x_[j] * colscale_[j];

    // duals from true costs
    for (int r = 0; r < m_; ++r) pi_[r] = cost_[basis_[r]];
    btran(pi_);
    out.row_dual.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
        // reduced cost of logical i is pi_i; d obj / d rhs_i in original units
        out.row_dual[i] = pi_[i] * rowscale_[i];
    }
    out.reduced_cost.assign(nstr_, 0.0);
    for (int j = 0; j < nstr_; ++j) {
        double d = cost_[j];
        for (int p = cstart_[j]; p < cstart_[j + 1]; ++p) d -= pi_[crow_[p]] * cval_[p];
        out.reduced_cost[j] = d / colscale_[j];
    }
    double obj = 0.0;
    for (int j = 0; j < nstr_; ++j) obj += out.x[j] * (cost_[j] / colscale_[j]);
    out.obj = obj;
    return out;
}

}  // namespace

LpSolution SimplexSolver::solve(const LinearProgram& lp) { return solve(lp, nullptr); }

LpSolution SimplexSolver::solve(const LinearProgram& lp, BasisState* state) {
    Kernel k(lp, opt_);
    LpSolution s = k.run(state);
    stats_ = k.stats;
    return s;
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt) {
    SimplexSolver s(opt);
    return s.solve(lp);
}

}  // namespace iegs
