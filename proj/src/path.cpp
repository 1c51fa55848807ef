#include "bpinterp/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bpinterp/normal_tail.hpp"

namespace bpinterp {

PathState::PathState(std::span<const double> h) {
    const std::size_t d = h.size();
    if (d == 0) throw std::invalid_argument("PathState: empty input");

    // Sort by decreasing absolute value, ties broken by original index.
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&h](std::size_t a, std::size_t b) {
        const double fa = std::fabs(h[a]), fb = std::fabs(h[b]);
        if (fa != fb) return fa > fb;
        return a < b;
    });
    h_.resize(d);
    for (std::size_t i = 0; i < d; ++i) h_[i] = std::fabs(h[order[i]]);
    for (std::size_t i = 0; i < d; ++i) {
        if (h_[i] == 0.0) ++zero_count_;
        if (i + 1 < d && h_[i] == h_[i + 1]) ++tie_count_;
    }

    prefix_l1_.assign(d + 1, 0.0L);
    prefix_l2sq_.assign(d + 1, 0.0L);
    for (std::size_t i = 0; i < d; ++i) {
        const long double v = h_[i];
        prefix_l1_[i + 1] = prefix_l1_[i] + v;
        prefix_l2sq_[i + 1] = prefix_l2sq_[i] + v * v;
    }

    const long double hmax = h_[0];
    breakpoints_.assign(d + 2, 0.0);
    for (std::size_t s = 2; s <= d; ++s) {
        const long double hs = h_[s - 1];
        const long double num = (prefix_l1_[s] - static_cast<long double>(s) * hs) * hmax;
        const long double den = prefix_l2sq_[s] - prefix_l1_[s] * hs;
        breakpoints_[s] = static_cast<double>(num / den);
    }
    breakpoints_[2] = 1.0;  // the s = 2 expression reduces to 1 exactly
    breakpoints_[d + 1] =
        static_cast<double>(static_cast<long double>(d) * hmax / prefix_l1_[d]);
    alpha_diamond_ = static_cast<double>(prefix_l1_[d] * hmax / prefix_l2sq_[d]);
}

namespace {

// Unique s in {2..d} with alpha_s < alpha <= alpha_{s+1}; s = 1 at alpha = 1.
std::size_t locate_segment(const PathState& state, double alpha) {
    const std::size_t d = state.dim();
    if (alpha <= 1.0) return 1;
    std::size_t lo = 2, hi = d;  // invariant: breakpoint(lo) < alpha
    if (alpha > state.breakpoint(d)) return d;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (state.breakpoint(mid) < alpha) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

struct DualPair {
    long double lambda;
    long double mu;
};

DualPair duals_on_segment(const PathState& state, std::size_t s, long double alpha) {
    const long double p1 = state.prefix_l1_ext(s);
    const long double p2 = state.prefix_l2sq_ext(s);
    const long double hmax = state.h_max();
    const long double den = static_cast<long double>(s) * p2 - p1 * p1;
    return {(static_cast<long double>(s) * hmax - alpha * p1) / den,
            (p1 * hmax - alpha * p2) / den};
}

} // namespace

SegmentNorms segment_norms(const PathState& state, double alpha) {
    if (alpha < 1.0 - 1e-12 || alpha > state.alpha_max() * (1.0 + 1e-12))
        throw std::domain_error("segment_norms: alpha outside [1, alpha_max]");
    SegmentNorms out;
    const std::size_t s = locate_segment(state, alpha);
    out.s = s;
    if (s == 1) {
        out.lambda = 1.0 / state.h_max();
        out.mu = 0.0;
        out.l1 = 1.0;
        out.l2sq = 1.0;
        out.inner_h = state.h_max();
        return out;
    }
    const DualPair dp = duals_on_segment(state, s, alpha);
    const long double p1 = state.prefix_l1_ext(s);
    const long double p2 = state.prefix_l2sq_ext(s);
    out.lambda = static_cast<double>(dp.lambda);
    out.mu = static_cast<double>(dp.mu);
    out.l1 = static_cast<double>(dp.lambda * p1 - dp.mu * static_cast<long double>(s));
    out.l2sq = static_cast<double>(dp.lambda * dp.lambda * p2 -
                                   2.0L * dp.lambda * dp.mu * p1 +
                                   dp.mu * dp.mu * static_cast<long double>(s));
    out.inner_h = static_cast<double>(dp.lambda * p2 - dp.mu * p1);
    return out;
}

GammaPoint gamma(const PathState& state, double alpha) {
    const SegmentNorms norms = segment_norms(state, alpha);
    GammaPoint pt;
    pt.alpha = alpha;
    pt.segment_s = norms.s;
    pt.lambda = norms.lambda;
    pt.mu = norms.mu;
    pt.l1 = norms.l1;
    pt.l2sq = norms.l2sq;
    pt.inner_h = norms.inner_h;
    pt.w.assign(state.dim(), 0.0);
    if (norms.s == 1) {
        pt.w[0] = 1.0;
        return pt;
    }
    const auto& h = state.order_stats();
    for (std::size_t i = 0; i < norms.s; ++i) {
        const double wi = norms.lambda * h[i] - norms.mu;
        pt.w[i] = wi > 0.0 ? wi : 0.0;
    }
    return pt;
}

GammaPoint gamma_at_breakpoint(const PathState& state, std::size_t s) {
    const std::size_t d = state.dim();
    if (s < 2 || s > d) throw std::domain_error("gamma_at_breakpoint: s outside [2, d]");
    const auto& h = state.order_stats();
    const long double hs = h[s - 1];
    const long double inner_vh = state.prefix_l2sq_ext(s) - state.prefix_l1_ext(s) * hs;
    const long double scale = static_cast<long double>(state.h_max()) / inner_vh;

    GammaPoint pt;
    pt.alpha = state.breakpoint(s);
    pt.segment_s = s - 1;
    pt.lambda = static_cast<double>(scale);
    pt.mu = static_cast<double>(scale * hs);
    pt.w.assign(d, 0.0);
    for (std::size_t i = 0; i + 1 < s; ++i)
        pt.w[i] = static_cast<double>(scale * (static_cast<long double>(h[i]) - hs));
    const long double p1 = state.prefix_l1_ext(s);
    const long double p2 = state.prefix_l2sq_ext(s);
    pt.l1 = static_cast<double>(scale * (p1 - static_cast<long double>(s) * hs));
    pt.l2sq = static_cast<double>(
        scale * scale *
        (p2 - 2.0L * hs * p1 + static_cast<long double>(s) * hs * hs));
    pt.inner_h = state.h_max();
    return pt;
}

PathNormEstimates path_norm_estimates(std::uint64_t s, std::uint64_t d) {
    if (11 * s > d) throw std::domain_error("path_norm_estimates: requires 11 s <= d");
    const double t = t_quantile(s, d).t;
    const double t2 = t * t;
    PathNormEstimates out;
    out.t = t;
    out.l1_over_hinf = 1.0 / t - 2.0 / (t * t2);
    out.l2sq_over_hinf2 = 2.0 / (static_cast<double>(s) * t2);
    out.vs_l2sq = static_cast<double>(s) * (2.0 / t2 - 10.0 / (t2 * t2));
    out.vs_l1 = static_cast<double>(s) * (1.0 / t - 2.0 / (t * t2));
    out.vs_inner = static_cast<double>(s);
    return out;
}

MonotonicityReport verify_monotonicity(const PathState& state, std::size_t grid_size) {
    if (grid_size < 3) throw std::invalid_argument("verify_monotonicity: grid_size >= 3");
    const std::size_t d = state.dim();

    std::vector<double> grid;
    grid.reserve((d + 1) * (grid_size + 1));
    for (std::size_t s = 2; s <= d + 1; ++s) {
        const double left = state.breakpoint(s);
        grid.push_back(left);
        if (s <= d) {
            const double right = state.breakpoint(s + 1);
            for (std::size_t g = 1; g <= grid_size; ++g) {
                const double frac = static_cast<double>(g) / static_cast<double>(grid_size + 1);
                grid.push_back(left + frac * (right - left));
            }
        }
    }

    MonotonicityReport rep;
    rep.grid_points = grid.size();
    std::vector<double> l2sq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) l2sq[i] = segment_norms(state, grid[i]).l2sq;

    const double diamond = state.alpha_diamond();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double slack = 1e-12 * std::max(1.0, l2sq[i]);
        if (grid[i + 1] <= diamond) {
            if (l2sq[i + 1] > l2sq[i] + slack) ++rep.decrease_violations;
        } else if (grid[i] >= diamond) {
            if (l2sq[i + 1] < l2sq[i] - slack) ++rep.increase_violations;
        }
    }
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        const double span = grid[i + 2] - grid[i];
        if (span <= 0.0) continue;
        const double frac = (grid[i + 1] - grid[i]) / span;
        const double chord = (1.0 - frac) * l2sq[i] + frac * l2sq[i + 2];
        if (l2sq[i + 1] > chord + 1e-9) ++rep.convexity_violations;
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double r0 = l2sq[i] / (grid[i] * grid[i]);
        const double r1 = l2sq[i + 1] / (grid[i + 1] * grid[i + 1]);
        if (r1 > r0 * (1.0 + 1e-12)) ++rep.ratio_violations;
    }
    return rep;
}

} // namespace bpinterp
