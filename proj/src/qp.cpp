#include "bpinterp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bpinterp {

namespace {

struct EqpSolution {
    bool ok = false;
    double lambda = 0.0;
    double mu = 0.0;
};

// Minimum-norm point on the free coordinates under 1^T w = alpha and,
// when the inequality is in the working set, q^T w = tau. Free coordinates
// take the affine form w_i = lambda q_i - mu.
EqpSolution solve_eqp(std::span<const double> q, const std::vector<bool>& pinned,
                      double tau, double alpha, bool ineq_active) {
    double s1 = 0.0, s2 = 0.0;
    std::size_t f = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (pinned[i]) continue;
        s1 += q[i];
        s2 += q[i] * q[i];
        ++f;
    }
    if (f == 0) return {};
    EqpSolution out;
    if (!ineq_active) {
        out.ok = true;
        out.lambda = 0.0;
        out.mu = -alpha / static_cast<double>(f);
        return out;
    }
    if (f == 1) {
        // Both equalities act on a single coordinate; consistent only when
        // q_i * alpha happens to equal tau.
        const double qf = s1;
        if (std::fabs(qf * alpha - tau) > 1e-9 * (1.0 + std::fabs(tau))) return {};
        out.ok = true;
        out.lambda = alpha / qf;  // w_i = lambda q_i - mu with mu = 0
        out.mu = 0.0;
        return out;
    }
    const double denom = static_cast<double>(f) * s2 - s1 * s1;
    if (!(std::fabs(denom) > 1e-14 * (1.0 + s2))) return {};
    out.ok = true;
    out.lambda = (static_cast<double>(f) * tau - alpha * s1) / denom;
    out.mu = (s1 * tau - alpha * s2) / denom;
    return out;
}

} // namespace

PathQpResult solve_path_qp(std::span<const double> q, double tau, double alpha,
                           const PathQpOptions& options) {
    const std::size_t d = q.size();
    if (d == 0) throw std::invalid_argument("solve_path_qp: empty q");
    if (!(tau > 0.0)) throw std::invalid_argument("solve_path_qp: tau must be positive");

    PathQpResult res;
    if (alpha < 0.0) return res;

    double qmax = -std::numeric_limits<double>::infinity();
    double qsum = 0.0;
    std::size_t jmax = 0;
    for (std::size_t i = 0; i < d; ++i) {
        qsum += q[i];
        if (q[i] > qmax) {
            qmax = q[i];
            jmax = i;
        }
    }
    const double feas_tol = 1e-12 * (1.0 + std::fabs(tau));
    if (alpha * qmax < tau - feas_tol) return res;  // Infeasible

    const std::size_t max_swaps = options.max_swaps ? options.max_swaps : 10 * d;
    const double ztol = options.zero_tol * std::max(1.0, alpha);

    // Feasible start: uniform point if the inequality is slack there,
    // otherwise the mix of the uniform point and the best vertex that
    // meets <w,q> = tau exactly.
    Vector w(d, alpha / static_cast<double>(d));
    const double uniform_val = alpha * qsum / static_cast<double>(d);
    bool ineq_active = uniform_val < tau;
    std::vector<bool> pinned(d, false);
    if (ineq_active) {
        const double vertex_val = alpha * qmax;
        const double theta = std::min(1.0, (tau - uniform_val) / (vertex_val - uniform_val));
        for (std::size_t i = 0; i < d; ++i) {
            w[i] *= (1.0 - theta);
            if (i == jmax) w[i] += theta * alpha;
            if (w[i] <= ztol) {
                w[i] = 0.0;
                pinned[i] = true;
            }
        }
    }

    double lambda = 0.0, mu = 0.0;
    Vector cand(d);
    for (std::size_t swap = 0; swap <= max_swaps; ++swap) {
        res.swaps = swap;
        const EqpSolution eqp = solve_eqp(q, pinned, tau, alpha, ineq_active);
        if (!eqp.ok) {
            // Degenerate working set (constant q on the free coordinates);
            // cannot happen for distinct positive q.
            return res;
        }
        lambda = eqp.lambda;
        mu = eqp.mu;
        for (std::size_t i = 0; i < d; ++i) cand[i] = pinned[i] ? 0.0 : lambda * q[i] - mu;

        double min_free = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            if (!pinned[i]) min_free = std::min(min_free, cand[i]);
        double cand_ineq_slack = 0.0;
        if (!ineq_active) {
            double val = 0.0;
            for (std::size_t i = 0; i < d; ++i) val += cand[i] * q[i];
            cand_ineq_slack = val - tau;
        }

        if (min_free >= -ztol && (ineq_active || cand_ineq_slack >= -feas_tol)) {
            w = cand;
            for (std::size_t i = 0; i < d; ++i) w[i] = std::max(w[i], 0.0);

            // Dual check: pinned coordinates need mu - lambda q_i >= 0,
            // the active inequality needs lambda >= 0.
            double worst = -options.dual_tol * std::max(1.0, std::fabs(mu));
            std::size_t release = d;
            bool release_ineq = false;
            for (std::size_t i = 0; i < d; ++i) {
                if (!pinned[i]) continue;
                const double nu = mu - lambda * q[i];
                if (nu < worst) {
                    worst = nu;
                    release = i;
                }
            }
            if (ineq_active && lambda < worst) {
                release_ineq = true;
                release = d;
            }
            if (release == d && !release_ineq) {
                res.status = QpStatus::Optimal;
                break;
            }
            if (release_ineq) {
                ineq_active = false;
            } else {
                pinned[release] = false;
            }
            continue;
        }

        // Step toward the candidate until a nonnegativity bound (or the
        // slack inequality) blocks.
        double theta = 1.0;
        std::size_t block = d;
        bool block_ineq = false;
        for (std::size_t i = 0; i < d; ++i) {
            if (pinned[i]) continue;
            const double p = cand[i] - w[i];
            if (p < -ztol) {
                const double t = w[i] / -p;
                if (t < theta) {
                    theta = t;
                    block = i;
                }
            }
        }
        if (!ineq_active) {
            double val = 0.0, pval = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                val += w[i] * q[i];
                pval += (cand[i] - w[i]) * q[i];
            }
            if (pval < -feas_tol) {
                const double t = (val - tau) / -pval;
                if (t < theta) {
                    theta = t;
                    block = d;
                    block_ineq = true;
                }
            }
        }
        for (std::size_t i = 0; i < d; ++i)
            if (!pinned[i]) w[i] += theta * (cand[i] - w[i]);
        if (block_ineq) {
            ineq_active = true;
        } else if (block < d) {
            w[block] = 0.0;
            pinned[block] = true;
        } else {
            // theta == 1 with no blocker should have been the feasible
            // branch; accept the candidate and let the next pass decide.
        }
        if (res.swaps + 1 > max_swaps) {
            res.status = QpStatus::SwapLimit;
            res.w = w;
            return res;
        }
    }

    if (res.status != QpStatus::Optimal) {
        res.status = QpStatus::SwapLimit;
        res.w = w;
        return res;
    }

    res.w = w;
    res.lambda = ineq_active ? lambda : 0.0;
    res.mu = mu;

    // Honest KKT residuals on the returned point.
    double stat = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (w[i] > 0.0) {
            stat = std::max(stat, std::fabs(w[i] - (res.lambda * q[i] - mu)));
        } else {
            const double nu = mu - res.lambda * q[i];
            if (nu < 0.0) stat = std::max(stat, -nu);
        }
    }
    res.kkt_stationarity = stat;
    double val = 0.0;
    for (std::size_t i = 0; i < d; ++i) val += w[i] * q[i];
    res.kkt_complementarity = std::fabs(res.lambda * (val - tau)) / std::max(1.0, std::fabs(tau));
    return res;
}

} // namespace bpinterp
