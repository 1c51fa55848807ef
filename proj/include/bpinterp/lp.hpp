#pragma once

#include <cstddef>
#include <vector>

#include "bpinterp/linalg.hpp"

namespace bpinterp {

// Standard form: min c^T z  s.t.  A z = b, z >= 0, with A of size m x k, m <= k.
struct LpProblem {
    Matrix a;
    Vector b;
    Vector c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpOptions {
    double primal_tol = 1e-8;
    double dual_tol = 1e-9;
    double pivot_tol = 1e-11;
    // 0 means the default cap of 50 * (m + k) pivots.
    std::size_t max_iterations = 0;
    // Consecutive degenerate (zero-step) pivots tolerated under Dantzig
    // pricing before Bland's rule engages; it disengages on progress.
    std::size_t dantzig_pivot_limit = 1000;
    // Rebuild the basis inverse from scratch this often.
    std::size_t refactor_interval = 100;
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    Vector z;                 // length k, valid when status == Optimal
    double objective = 0.0;
    std::vector<std::size_t> basis;  // m basic column indices
    std::size_t iterations = 0;
    Vector dual;              // length m row multipliers (basis prices)
};

// Two-phase revised simplex with a dense, explicitly maintained basis
// inverse. Designed for short-fat dense problems: pricing is one row sweep
// over A per pivot (O(m k)), basis updates are O(m^2).
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

} // namespace bpinterp
