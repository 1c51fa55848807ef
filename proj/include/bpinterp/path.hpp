#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bpinterp/linalg.hpp"

namespace bpinterp {

// Absolute order statistics of a vector plus everything derived from them
// that the auxiliary programs query: prefix sums, the breakpoint sequence
// alpha_2..alpha_{d+1}, and the l2-minimum location alpha_diamond.
// Immutable after construction; all queries are read-only.
class PathState {
public:
    explicit PathState(std::span<const double> h);

    std::size_t dim() const { return h_.size(); }
    const Vector& order_stats() const { return h_; }
    double h_max() const { return h_[0]; }

    // ||H_[s]||_1 and ||H_[s]||_2^2 for 0 <= s <= d.
    double prefix_l1(std::size_t s) const { return static_cast<double>(prefix_l1_[s]); }
    double prefix_l2sq(std::size_t s) const { return static_cast<double>(prefix_l2sq_[s]); }

    // Valid for 2 <= s <= d + 1; alpha_2 = 1 and alpha_{d+1} = alpha_max.
    double breakpoint(std::size_t s) const { return breakpoints_[s]; }
    double alpha_max() const { return breakpoints_[h_.size() + 1]; }
    double alpha_diamond() const { return alpha_diamond_; }

    // Degenerate-input diagnostics (ties broken by original index).
    std::size_t tie_count() const { return tie_count_; }
    std::size_t zero_count() const { return zero_count_; }
    bool degenerate() const { return tie_count_ > 0 || zero_count_ > 0; }

    long double prefix_l1_ext(std::size_t s) const { return prefix_l1_[s]; }
    long double prefix_l2sq_ext(std::size_t s) const { return prefix_l2sq_[s]; }

private:
    Vector h_;
    std::vector<long double> prefix_l1_;
    std::vector<long double> prefix_l2sq_;
    Vector breakpoints_;
    double alpha_diamond_ = 0.0;
    std::size_t tie_count_ = 0;
    std::size_t zero_count_ = 0;
};

inline PathState abs_order_stats(std::span<const double> h) { return PathState(h); }

// Norms of the path point at a given alpha, computed from prefix sums in
// O(log d) without materializing the vector. Free coordinates satisfy
// w_i = lambda H_i - mu on the first `s` entries.
struct SegmentNorms {
    std::size_t s = 1;
    double lambda = 0.0;
    double mu = 0.0;
    double l1 = 0.0;
    double l2sq = 0.0;
    double inner_h = 0.0;
};
SegmentNorms segment_norms(const PathState& state, double alpha);

struct GammaPoint {
    double alpha = 0.0;
    std::size_t segment_s = 1;
    Vector w;
    double lambda = 0.0;
    double mu = 0.0;
    double l1 = 0.0;
    double l2sq = 0.0;
    double inner_h = 0.0;
};

// Minimum-l2-norm point on {w >= 0, ||w||_1 = alpha, <w,H> >= ||H||_inf},
// in closed form. Throws std::domain_error outside [1, alpha_max].
GammaPoint gamma(const PathState& state, double alpha);

// Path point at the s-th breakpoint via v_s = H_[s] - H_s 1_[s], rescaled
// so <w,H> = ||H||_inf. (s-1)-sparse. Valid for 2 <= s <= d.
GammaPoint gamma_at_breakpoint(const PathState& state, std::size_t s);

// Deterministic predictions for the breakpoint norms in the regime
// 11 s <= d, driven by the quantile t_s with 2 Phi_c(t_s) = s/d.
struct PathNormEstimates {
    double t = 0.0;
    double l1_over_hinf = 0.0;     // ~ 1/t - 2/t^3
    double l2sq_over_hinf2 = 0.0;  // ~ 2/(s t^2)
    double vs_l2sq = 0.0;          // ~ s (2/t^2 - 10/t^4)
    double vs_l1 = 0.0;            // ~ s (1/t - 2/t^3)
    double vs_inner = 0.0;         // ~ s
};
PathNormEstimates path_norm_estimates(std::uint64_t s, std::uint64_t d);

// Grid check of the shape facts used by the auxiliary programs:
// ||gamma(alpha)||_2^2 decreases until alpha_diamond then increases, is
// convex, and ||gamma(alpha)||_2^2 / alpha^2 is strictly decreasing.
struct MonotonicityReport {
    std::size_t grid_points = 0;
    std::size_t decrease_violations = 0;
    std::size_t increase_violations = 0;
    std::size_t convexity_violations = 0;
    std::size_t ratio_violations = 0;
    std::size_t total_violations() const {
        return decrease_violations + increase_violations + convexity_violations + ratio_violations;
    }
};
MonotonicityReport verify_monotonicity(const PathState& state, std::size_t grid_size);

} // namespace bpinterp
