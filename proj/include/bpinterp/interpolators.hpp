#pragma once

#include "bpinterp/linalg.hpp"
#include "bpinterp/lp.hpp"

namespace bpinterp {

struct InterpolatorResult {
    Vector w_hat;
    double l1_norm = 0.0;
    double l2_norm = 0.0;
    double interpolation_residual = 0.0;  // ||X w_hat - y||_inf
    LpStatus solver_status = LpStatus::IterationLimit;
    std::size_t support_size = 0;         // entries with |w_i| > 1e-9
    Vector dual;                          // BP only: certificate with ||X^T u||_inf <= 1
};

// Minimum-l1-norm interpolator (basis pursuit), solved as the LP
//   min 1^T (u + v)  s.t.  [X, -X](u; v) = y, (u; v) >= 0,  w = u - v.
InterpolatorResult basis_pursuit(const Matrix& x, const Vector& y, const LpOptions& options = {});

// Minimum-l2-norm interpolator w = X^T (X X^T)^{-1} y. A failed Cholesky is
// retried once with ridge 1e-10 tr(X X^T)/n on the diagonal.
InterpolatorResult min_l2_interpolator(const Matrix& x, const Vector& y);

// ||w_hat - w_star||_2^2, the excess risk for isotropic features.
// Throws std::invalid_argument on length mismatch.
double prediction_error(const Vector& w_hat, const Vector& w_star);

} // namespace bpinterp
