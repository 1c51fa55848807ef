#include "bpinterp/interpolators.hpp"

#include <cmath>
#include <stdexcept>

namespace bpinterp {

namespace {

constexpr double kSupportThreshold = 1e-9;

void fill_diagnostics(InterpolatorResult& res, const Matrix& x, const Vector& y) {
    res.l1_norm = norm_l1(res.w_hat);
    res.l2_norm = norm_l2(res.w_hat);
    res.support_size = 0;
    for (double v : res.w_hat)
        if (std::fabs(v) > kSupportThreshold) ++res.support_size;
    const Vector xw = matvec(x, res.w_hat);
    double r = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) r = std::max(r, std::fabs(xw[i] - y[i]));
    res.interpolation_residual = r;
}

} // namespace

InterpolatorResult basis_pursuit(const Matrix& x, const Vector& y, const LpOptions& options) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n > d) throw std::invalid_argument("basis_pursuit: requires n <= d");
    if (y.size() != n) throw std::invalid_argument("basis_pursuit: y length mismatch");

    LpProblem lp;
    lp.a = Matrix(n, 2 * d);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = x.row(i);
        auto dst = lp.a.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            dst[j] = src[j];
            dst[d + j] = -src[j];
        }
    }
    lp.b = y;
    lp.c.assign(2 * d, 1.0);

    const LpSolution sol = solve_lp(lp, options);

    InterpolatorResult res;
    res.solver_status = sol.status;
    res.w_hat.assign(d, 0.0);
    if (sol.status != LpStatus::Optimal) return res;
    for (std::size_t j = 0; j < d; ++j) res.w_hat[j] = sol.z[j] - sol.z[d + j];
    res.dual = sol.dual;
    fill_diagnostics(res, x, y);
    // The LP objective is the l1 norm of the split representation; at a
    // vertex u and v have disjoint supports so the two agree.
    res.l1_norm = sol.objective;
    return res;
}

InterpolatorResult min_l2_interpolator(const Matrix& x, const Vector& y) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n > d) throw std::invalid_argument("min_l2_interpolator: requires n <= d");
    if (y.size() != n) throw std::invalid_argument("min_l2_interpolator: y length mismatch");

    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double g = dot(x.row(i), x.row(j));
            gram(i, j) = g;
            gram(j, i) = g;
        }
    }

    SpdResult spd = solve_spd(gram, y);
    if (spd.status == SpdStatus::NotPositiveDefinite) {
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += gram(i, i);
        const double ridge = 1e-10 * trace / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) gram(i, i) += ridge;
        spd = solve_spd(gram, y);
    }

    InterpolatorResult res;
    if (spd.status == SpdStatus::NotPositiveDefinite) {
        res.solver_status = LpStatus::Infeasible;
        res.w_hat.assign(d, 0.0);
        return res;
    }
    res.solver_status = LpStatus::Optimal;
    res.w_hat = matvec_transposed(x, spd.x);
    fill_diagnostics(res, x, y);
    return res;
}

double prediction_error(const Vector& w_hat, const Vector& w_star) {
    if (w_hat.size() != w_star.size())
        throw std::invalid_argument("prediction_error: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < w_hat.size(); ++i) {
        const double diff = w_hat[i] - w_star[i];
        s += diff * diff;
    }
    return s;
}

} // namespace bpinterp
