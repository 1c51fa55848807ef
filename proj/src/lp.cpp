#include "bpinterp/lp.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bpinterp {

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Internal working state. Rows are pre-flipped so b >= 0; artificial
// columns k..k+m-1 are kept implicit (column k+i is e_i).
class SimplexSolver {
public:
    SimplexSolver(const LpProblem& p, const LpOptions& opt)
        : a_(p.a), opt_(opt), m_(p.a.rows()), k_(p.a.cols()) {
        row_sign_.assign(m_, 1.0);
        b_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (p.b[i] < 0.0) row_sign_[i] = -1.0;
            b_[i] = std::fabs(p.b[i]);
        }
        cost_.assign(k_ + m_, 0.0);
        basis_.resize(m_);
        binv_.assign(m_ * m_, 0.0);
        xb_.resize(m_);
        is_basic_.assign(k_ + m_, false);
    }

    LpSolution run(const Vector& c) {
        max_iter_ = opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + k_);

        // Phase 1: artificial basis, minimize the artificial mass.
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = k_ + i;
            is_basic_[k_ + i] = true;
            binv_[i * m_ + i] = 1.0;
            xb_[i] = b_[i];
        }
        std::fill(cost_.begin(), cost_.begin() + static_cast<std::ptrdiff_t>(k_), 0.0);
        std::fill(cost_.begin() + static_cast<std::ptrdiff_t>(k_), cost_.end(), 1.0);
        phase_ = 1;

        LpStatus st = iterate();
        if (st != LpStatus::Optimal) {
            // The phase-1 objective is bounded below, so an unbounded ray
            // here means the data is numerically inconsistent.
            return finish(st == LpStatus::Unbounded ? LpStatus::Infeasible : st);
        }
        const double feas_tol = opt_.primal_tol * (1.0 + norm_linf(b_));
        if (phase1_objective() > feas_tol) return finish(LpStatus::Infeasible);
        pivot_out_artificials();

        // Phase 2: original costs; artificials may never re-enter and are
        // kicked out at zero level if an entering direction touches them.
        for (std::size_t j = 0; j < k_; ++j) cost_[j] = c[j];
        std::fill(cost_.begin() + static_cast<std::ptrdiff_t>(k_), cost_.end(), 0.0);
        phase_ = 2;
        st = iterate();
        return finish(st);
    }

private:
    double phase1_objective() const {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= k_) s += xb_[i];
        return s;
    }

    // Column j of the working constraint matrix.
    void gather_column(std::size_t j, Vector& col) const {
        col.assign(m_, 0.0);
        if (j >= k_) {
            col[j - k_] = 1.0;
        } else {
            for (std::size_t i = 0; i < m_; ++i) col[i] = row_sign_[i] * a_(i, j);
        }
    }

    // y^T = c_B^T B^{-1}
    void compute_duals(Vector& y) const {
        y.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = binv_.data() + i * m_;
            for (std::size_t j = 0; j < m_; ++j) y[j] += cb * row[j];
        }
    }

    // Reduced costs for all structural columns in one row sweep over A.
    void compute_reduced_costs(const Vector& y, Vector& r) const {
        r.assign(k_, 0.0);
        for (std::size_t j = 0; j < k_; ++j) r[j] = cost_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const double yi = y[i] * row_sign_[i];
            if (yi == 0.0) continue;
            auto row = a_.row(i);
            for (std::size_t j = 0; j < k_; ++j) r[j] -= yi * row[j];
        }
    }

    std::size_t price(const Vector& y, const Vector& r, bool bland) const {
        std::size_t enter = kNone;
        double best = -opt_.dual_tol;
        for (std::size_t j = 0; j < k_; ++j) {
            if (is_basic_[j]) continue;
            const double rj = r[j];
            if (rj < best) {
                if (bland) {
                    if (rj < -opt_.dual_tol) return j;
                } else {
                    best = rj;
                    enter = j;
                }
            }
        }
        if (phase_ == 1) {
            // Artificial column k+i prices as cost 1 - y_i.
            for (std::size_t i = 0; i < m_; ++i) {
                const std::size_t j = k_ + i;
                if (is_basic_[j]) continue;
                const double rj = 1.0 - y[i];
                if (rj < best) {
                    if (bland) {
                        if (rj < -opt_.dual_tol) return j;
                    } else {
                        best = rj;
                        enter = j;
                    }
                }
            }
        }
        return enter;
    }

    LpStatus iterate() {
        Vector y, r, col, d;
        std::size_t stalled = 0;
        while (true) {
            if (iterations_ >= max_iter_) return LpStatus::IterationLimit;
            compute_duals(y);
            compute_reduced_costs(y, r);
            // Bland's rule engages only while the iteration is stalled on
            // degenerate pivots; unconditional Bland pricing makes large
            // problems crawl.
            const bool bland = stalled >= opt_.dantzig_pivot_limit;
            const std::size_t enter = price(y, r, bland);
            if (enter == kNone) return LpStatus::Optimal;

            gather_column(enter, col);
            apply_binv(col, d);

            // Basic artificials stuck at zero leave first; a zero-length
            // step through any nonzero pivot keeps the iterate feasible.
            std::size_t leave = kNone;
            double theta = 0.0;
            if (phase_ == 2) {
                for (std::size_t i = 0; i < m_; ++i) {
                    if (basis_[i] >= k_ && std::fabs(d[i]) > opt_.pivot_tol) {
                        leave = i;
                        theta = 0.0;
                        break;
                    }
                }
            }
            if (leave == kNone) {
                theta = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < m_; ++i) {
                    if (d[i] > opt_.pivot_tol) {
                        const double ratio = xb_[i] / d[i];
                        if (ratio < theta - 1e-12 * (1.0 + std::fabs(theta)) ||
                            (ratio < theta + 1e-12 * (1.0 + std::fabs(theta)) &&
                             (leave == kNone ||
                              (bland ? basis_[i] < basis_[leave]
                                     : std::fabs(d[i]) > std::fabs(d[leave]))))) {
                            theta = ratio;
                            leave = i;
                        }
                    }
                }
                if (leave == kNone)
                    return phase_ == 1 ? LpStatus::Infeasible : LpStatus::Unbounded;
            }

            pivot(enter, leave, theta, d);
            if (theta > opt_.pivot_tol) stalled = 0;
            else ++stalled;
            ++iterations_;
#ifdef BPINTERP_LP_TRACE
            if (iterations_ % 2000 == 0) {
                double obj = 0.0;
                for (std::size_t i = 0; i < m_; ++i) obj += cost_[basis_[i]] * xb_[i];
                std::fprintf(stderr, "iter=%zu phase=%d obj=%.10f theta=%.3e stalled=%zu\n",
                             iterations_, phase_, obj, theta, stalled);
            }
#endif
            if (iterations_ % opt_.refactor_interval == 0) refactorize();
        }
    }

    void apply_binv(const Vector& v, Vector& out) const {
        out.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = binv_.data() + i * m_;
            double s = 0.0;
            for (std::size_t j = 0; j < m_; ++j) s += row[j] * v[j];
            out[i] = s;
        }
    }

    void pivot(std::size_t enter, std::size_t leave, double theta, const Vector& d) {
        for (std::size_t i = 0; i < m_; ++i) xb_[i] -= theta * d[i];
        xb_[leave] = theta;

        const double piv = d[leave];
        double* lrow = binv_.data() + leave * m_;
        const double inv_piv = 1.0 / piv;
        for (std::size_t j = 0; j < m_; ++j) lrow[j] *= inv_piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave) continue;
            const double f = d[i];
            if (f == 0.0) continue;
            double* row = binv_.data() + i * m_;
            for (std::size_t j = 0; j < m_; ++j) row[j] -= f * lrow[j];
        }

        is_basic_[basis_[leave]] = false;
        basis_[leave] = enter;
        is_basic_[enter] = true;
    }

    // Gauss-Jordan rebuild of B^{-1} from the current basis columns, then a
    // fresh x_B = B^{-1} b. Clears drift accumulated by rank-one updates.
    void refactorize() {
        std::vector<double> work(m_ * 2 * m_, 0.0);
        Vector col;
        for (std::size_t jcol = 0; jcol < m_; ++jcol) {
            gather_column(basis_[jcol], col);
            for (std::size_t i = 0; i < m_; ++i) work[i * 2 * m_ + jcol] = col[i];
        }
        for (std::size_t i = 0; i < m_; ++i) work[i * 2 * m_ + m_ + i] = 1.0;

        for (std::size_t p = 0; p < m_; ++p) {
            std::size_t best = p;
            double best_val = std::fabs(work[p * 2 * m_ + p]);
            for (std::size_t i = p + 1; i < m_; ++i) {
                const double v = std::fabs(work[i * 2 * m_ + p]);
                if (v > best_val) {
                    best_val = v;
                    best = i;
                }
            }
            if (best_val <= opt_.pivot_tol)
                throw std::runtime_error("solve_lp: basis matrix is numerically singular");
            if (best != p)
                for (std::size_t j = 0; j < 2 * m_; ++j)
                    std::swap(work[p * 2 * m_ + j], work[best * 2 * m_ + j]);
            double* prow = work.data() + p * 2 * m_;
            const double inv_piv = 1.0 / prow[p];
            for (std::size_t j = 0; j < 2 * m_; ++j) prow[j] *= inv_piv;
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == p) continue;
                double* row = work.data() + i * 2 * m_;
                const double f = row[p];
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < 2 * m_; ++j) row[j] -= f * prow[j];
            }
        }
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j) binv_[i * m_ + j] = work[i * 2 * m_ + m_ + j];
        apply_binv(b_, xb_);
        for (std::size_t i = 0; i < m_; ++i)
            if (xb_[i] < 0.0 && xb_[i] > -opt_.primal_tol) xb_[i] = 0.0;
    }

    // After phase 1, swap zero-level artificials for structural columns
    // where a nonzero pivot exists; dependent rows keep their artificial
    // (pinned at zero by the phase-2 ratio guard).
    void pivot_out_artificials() {
        Vector col, d;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < k_) continue;
            std::size_t enter = kNone;
            for (std::size_t j = 0; j < k_ && enter == kNone; ++j) {
                if (is_basic_[j]) continue;
                gather_column(j, col);
                apply_binv(col, d);
                if (std::fabs(d[i]) > opt_.pivot_tol) enter = j;
            }
            if (enter == kNone) continue;
            gather_column(enter, col);
            apply_binv(col, d);
            pivot(enter, i, 0.0, d);
        }
    }

    LpSolution finish(LpStatus status) {
        LpSolution sol;
        sol.status = status;
        sol.iterations = iterations_;
        sol.basis = basis_;
        if (status != LpStatus::Optimal) return sol;

        refactorize();
        sol.z.assign(k_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < k_) sol.z[basis_[i]] = xb_[i];
        sol.objective = 0.0;
        for (std::size_t i = 0; i < m_; ++i) sol.objective += cost_[basis_[i]] * xb_[i];

        Vector y;
        compute_duals(y);
        sol.dual.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) sol.dual[i] = row_sign_[i] * y[i];
        return sol;
    }

    const Matrix& a_;
    LpOptions opt_;
    std::size_t m_;
    std::size_t k_;
    Vector row_sign_;
    Vector b_;
    Vector cost_;
    std::vector<std::size_t> basis_;
    std::vector<bool> is_basic_;
    std::vector<double> binv_;
    Vector xb_;
    std::size_t iterations_ = 0;
    std::size_t max_iter_ = 0;
    int phase_ = 1;
};

} // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
    if (problem.a.rows() > problem.a.cols())
        throw std::invalid_argument("solve_lp: requires m <= k");
    if (problem.b.size() != problem.a.rows() || problem.c.size() != problem.a.cols())
        throw std::invalid_argument("solve_lp: inconsistent dimensions");
    SimplexSolver solver(problem, options);
    return solver.run(problem.c);
}

} // namespace bpinterp
