#pragma once

#include <cstddef>

#include "bpinterp/linalg.hpp"

namespace bpinterp {

enum class QpStatus { Optimal, Infeasible, SwapLimit };

struct PathQpResult {
    QpStatus status = QpStatus::Infeasible;
    Vector w;
    double lambda = 0.0;  // multiplier of <w,q> >= tau (0 when inactive)
    double mu = 0.0;      // multiplier of 1^T w = alpha
    double kkt_stationarity = 0.0;
    double kkt_complementarity = 0.0;
    std::size_t swaps = 0;
};

struct PathQpOptions {
    // 0 means the default cap of 10 * d active-set changes.
    std::size_t max_swaps = 0;
    double zero_tol = 1e-12;
    double dual_tol = 1e-10;
};

// Minimizes ||w||_2^2 subject to <w,q> >= tau, w >= 0, 1^T w = alpha, by a
// primal active-set method over the nonnegativity constraints (the equality
// stays in the working set throughout). Free coordinates satisfy
// w_i = lambda q_i - mu at every iterate. Infeasible when
// alpha * max(q) < tau.
PathQpResult solve_path_qp(std::span<const double> q, double tau, double alpha,
                           const PathQpOptions& options = {});

} // namespace bpinterp
