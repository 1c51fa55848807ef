#pragma once

#include <cstdint>

#include "bpinterp/linalg.hpp"
#include "bpinterp/path.hpp"

namespace bpinterp {

// Shared inputs of the auxiliary programs. rho defaults to
// 10 / log(d/n)^{5/2}; the unnamed universal constants are configuration
// with the defaults used by the verification suites (c_b = 0, c_geoff = 2).
struct AuxParams {
    std::size_t n = 0;
    std::size_t d = 0;
    double sigma2 = 1.0;
    double rho = 0.0;
    double b_localization = 0.0;  // the l1 radius B
    double c_b = 0.0;
    double c_geoff = 2.0;
    double s_star = 1.0;

    static AuxParams make(std::size_t n, std::size_t d, double sigma2);
};

double default_rho(std::size_t n, std::size_t d);

enum class MBoundVariant { Proposition, ProofSketch };

// Deterministic localization radius for min_{Xw=xi} ||w||_1:
//   Proposition: sqrt(sigma^2 n / t_n^2 (1 - 2/t_n^2 + c_b/t_n^4))
//   ProofSketch: sqrt(sigma^2 n / (2 log(d/n) - log log(d/n) - log pi))
// Requires d > 11 n; throws std::domain_error when the bracket is <= 0.
double m_bound(const AuxParams& params, MBoundVariant variant);

// B(n,d) = c_geoff sigma sqrt(s_star) + M(n,d).
double b_radius(const AuxParams& params, MBoundVariant variant = MBoundVariant::ProofSketch);

enum class PhiStatus { Ok, InfeasibleEverywhere, EmptyInterval, DegenerateDenominator };

struct PhiResult {
    PhiStatus status = PhiStatus::Ok;
    double value = 0.0;
    double alpha_star = 0.0;
};

// Norm-localization value: min over feasible alpha of f(alpha) with
//   f(alpha)^2 = sigma^2 n (1+rho) alpha^2 / (Hmax^2 - (1+rho) n ||gamma(alpha)||_2^2),
// feasible meaning the denominator is positive. All breakpoints are
// evaluated, then golden-section refinement inside the two segments
// adjacent to the best one.
PhiResult phi_n(const PathState& state, const AuxParams& params);

struct FeasibleInterval {
    bool empty = true;
    double lo = 0.0;
    double hi = 0.0;
};

// Sublevel set {alpha : (1-rho) n (sigma^2 alpha^2 + B^2 ||gamma(alpha)||_2^2)
// <= B^2 Hmax^2}, located by ternary search on the convex excess followed by
// root bisection on each side (1e-10 absolute in alpha).
FeasibleInterval feasible_interval(const PathState& state, const AuxParams& params);

// Risk-maximization value B^2 ||gamma(lo)||_2^2 / lo^2, attained at the left
// interval endpoint because ||gamma(alpha)||_2^2 / alpha^2 decreases.
PhiResult phi_plus(const PathState& state, const AuxParams& params, const FeasibleInterval& interval);

// Risk-minimization value, attained where ||gamma||_2^2 is smallest over the
// interval, i.e. at alpha_diamond clamped into it.
PhiResult phi_minus(const PathState& state, const AuxParams& params, const FeasibleInterval& interval);

// Integers bracketing n through the quantile curve: s_lower is the largest s
// with t_s^2 >= t_n^2 + lambda/t_n, s_upper the smallest s with
// t_s^2 <= t_n^2 - lambda/t_n, plus the analytic estimates n exp(-+lambda/(2 t_n)).
struct SparsityWindow {
    std::uint64_t s_lower = 0;
    std::uint64_t s_upper = 0;
    double approx_lower = 0.0;
    double approx_upper = 0.0;
};
SparsityWindow sparsity_window(const AuxParams& params, double lambda);

// Everything the verification suites ask of one draw, in one record.
struct AuxiliaryReport {
    PhiResult phi_n;
    PhiResult phi_plus;
    PhiResult phi_minus;
    FeasibleInterval interval;
    double m = 0.0;            // localization bound used for B
    double target_rate = 0.0;  // sigma^2 / log(d/n)
    SparsityWindow window;     // populated when 11 n <= d and lambda > 0
    bool has_window = false;
};

// Evaluates all three programs on one draw. When params.b_localization is
// zero it is filled from b_radius with the given variant first.
AuxiliaryReport make_auxiliary_report(const PathState& state, AuxParams params,
                                      MBoundVariant variant = MBoundVariant::ProofSketch,
                                      double window_lambda = 0.0);

enum class AuxProgram { Norm, Plus, Minus };

struct OracleResult {
    bool feasible = false;
    double value = 0.0;
    Vector w;
    double constraint_slack = 0.0;  // quadratic-constraint activity at the best point
    std::size_t evaluations = 0;
};

// Brute-force optimum of the stated d-dimensional program (d <= 8): simplex
// lattice of directions crossed with a scale search, polished by projected
// coordinate moves with shrinking steps. Grid resolution doubles until two
// refinements agree within 5e-4 relative; hard cap 1e7 evaluations.
OracleResult phi_oracle_small_d(std::span<const double> h, AuxProgram program,
                                const AuxParams& params);

} // namespace bpinterp
