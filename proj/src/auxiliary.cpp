#include "bpinterp/auxiliary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bpinterp/normal_tail.hpp"

namespace bpinterp {

double default_rho(std::size_t n, std::size_t d) {
    const double l = std::log(static_cast<double>(d) / static_cast<double>(n));
    return 10.0 / std::pow(l, 2.5);
}

AuxParams AuxParams::make(std::size_t n, std::size_t d, double sigma2) {
    AuxParams p;
    p.n = n;
    p.d = d;
    p.sigma2 = sigma2;
    p.rho = default_rho(n, d);
    return p;
}

double m_bound(const AuxParams& params, MBoundVariant variant) {
    if (params.d <= 11 * params.n)
        throw std::domain_error("m_bound: requires d > 11 n");
    const double n = static_cast<double>(params.n);
    if (variant == MBoundVariant::ProofSketch) {
        const double l = std::log(static_cast<double>(params.d) / n);
        const double denom = 2.0 * l - std::log(l) - std::log(std::numbers::pi);
        if (!(denom > 0.0)) throw std::domain_error("m_bound: nonpositive denominator");
        return std::sqrt(params.sigma2 * n / denom);
    }
    const double t = t_quantile(params.n, params.d).t;
    const double t2 = t * t;
    const double factor = 1.0 - 2.0 / t2 + params.c_b / (t2 * t2);
    if (!(factor > 0.0)) throw std::domain_error("m_bound: nonpositive bracket");
    return std::sqrt(params.sigma2 * n / t2 * factor);
}

double b_radius(const AuxParams& params, MBoundVariant variant) {
    return params.c_geoff * std::sqrt(params.sigma2) * std::sqrt(params.s_star) +
           m_bound(params, variant);
}

namespace {

// ||gamma(alpha_s)||_2^2 from prefix sums, s in [2, d+1] (d+1 = alpha_max).
double breakpoint_l2sq(const PathState& state, std::size_t s) {
    const std::size_t d = state.dim();
    if (s == d + 1) return segment_norms(state, state.alpha_max()).l2sq;
    const auto& h = state.order_stats();
    const long double hs = h[s - 1];
    const long double p1 = state.prefix_l1_ext(s);
    const long double p2 = state.prefix_l2sq_ext(s);
    const long double scale = static_cast<long double>(state.h_max()) / (p2 - p1 * hs);
    return static_cast<double>(scale * scale *
                               (p2 - 2.0L * hs * p1 + static_cast<long double>(s) * hs * hs));
}

constexpr double kGolden = 0.61803398874989484820;

// Golden-section minimization with a coarse pre-grid to pick the bracket.
template <typename F>
std::pair<double, double> refine_minimum(F&& f, double lo, double hi) {
    if (!(hi > lo)) return {f(lo), lo};
    constexpr int kPre = 24;
    double best_x = lo, best_f = f(lo);
    for (int i = 1; i <= kPre; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / kPre;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - (hi - lo) / kPre);
    double b = std::min(hi, best_x + (hi - lo) / kPre);
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int iter = 0; iter < 200 && (b - a) > 1e-10; ++iter) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (fm < best_f) {
        best_f = fm;
        best_x = xm;
    }
    return {best_f, best_x};
}

} // namespace

PhiResult phi_n(const PathState& state, const AuxParams& params) {
    if (!(params.rho > 0.0) || !(params.rho < 0.5))
        throw std::domain_error("phi_n: requires 0 < rho < 1/2");
    PhiResult res;
    if (params.sigma2 == 0.0) {
        res.value = 0.0;
        res.alpha_star = state.alpha_diamond();
        return res;
    }

    const double hmax2 = state.h_max() * state.h_max();
    const double coef = (1.0 + params.rho) * static_cast<double>(params.n);
    // Feasibility is widest where the path norm is smallest.
    if (coef * segment_norms(state, state.alpha_diamond()).l2sq >= hmax2) {
        res.status = PhiStatus::InfeasibleEverywhere;
        return res;
    }

    const double s2n = params.sigma2 * static_cast<double>(params.n) * (1.0 + params.rho);
    auto objective_sq_at = [&](double alpha, double l2sq) {
        const double denom = hmax2 - coef * l2sq;
        if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
        return s2n * alpha * alpha / denom;
    };

    auto objective_sq = [&](double alpha) {
        return objective_sq_at(alpha, segment_norms(state, alpha).l2sq);
    };

    const std::size_t d = state.dim();
    const double diamond = std::clamp(state.alpha_diamond(), 1.0, state.alpha_max());
    double best = objective_sq(diamond);
    double best_alpha = diamond;
    std::size_t best_s = 0;
    for (std::size_t s = 2; s <= d + 1; ++s) {
        const double val = objective_sq_at(state.breakpoint(s), breakpoint_l2sq(state, s));
        if (val < best) {
            best = val;
            best_s = s;
            best_alpha = state.breakpoint(s);
        }
    }

    // Refine the two segments around the best breakpoint plus the segment
    // holding alpha_diamond (the feasible window may contain no breakpoint).
    std::vector<std::size_t> segments;
    if (best_s >= 3) segments.push_back(best_s - 1);
    if (best_s >= 2 && best_s <= d) segments.push_back(best_s);
    segments.push_back(segment_norms(state, diamond).s);
    for (std::size_t s : segments) {
        if (s < 2 || s > d) continue;
        auto [val, alpha] = refine_minimum(objective_sq, state.breakpoint(s), state.breakpoint(s + 1));
        if (val < best) {
            best = val;
            best_alpha = alpha;
        }
    }

    res.value = std::sqrt(best);
    res.alpha_star = best_alpha;
    return res;
}

FeasibleInterval feasible_interval(const PathState& state, const AuxParams& params) {
    const double b2 = params.b_localization * params.b_localization;
    const double hmax2 = state.h_max() * state.h_max();
    const double coef = (1.0 - params.rho) * static_cast<double>(params.n);
    auto g = [&](double alpha) {
        return coef * (params.sigma2 * alpha * alpha + b2 * segment_norms(state, alpha).l2sq) -
               b2 * hmax2;
    };

    double a = 1.0, b = state.alpha_max();
    // Ternary search on the convex excess.
    for (int iter = 0; iter < 200 && (b - a) > 1e-12 * state.alpha_max(); ++iter) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (g(m1) <= g(m2)) b = m2;
        else a = m1;
    }
    const double alpha_min = 0.5 * (a + b);
    if (g(alpha_min) > 0.0) return {};

    FeasibleInterval out;
    out.empty = false;

    if (g(1.0) <= 0.0) {
        out.lo = 1.0;
    } else {
        double lo = 1.0, hi = alpha_min;  // g(lo) > 0 >= g(hi)
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            if (g(mid) > 0.0) lo = mid;
            else hi = mid;
        }
        out.lo = hi;
    }
    if (g(state.alpha_max()) <= 0.0) {
        out.hi = state.alpha_max();
    } else {
        double lo = alpha_min, hi = state.alpha_max();  // g(lo) <= 0 < g(hi)
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            if (g(mid) > 0.0) hi = mid;
            else lo = mid;
        }
        out.hi = lo;
    }
    return out;
}

PhiResult phi_plus(const PathState& state, const AuxParams& params, const FeasibleInterval& interval) {
    PhiResult res;
    if (interval.empty) {
        res.status = PhiStatus::EmptyInterval;
        return res;
    }
    const double b2 = params.b_localization * params.b_localization;
    const double l2sq = segment_norms(state, interval.lo).l2sq;
    res.value = b2 * l2sq / (interval.lo * interval.lo);
    res.alpha_star = interval.lo;
    return res;
}

PhiResult phi_minus(const PathState& state, const AuxParams& params, const FeasibleInterval& interval) {
    PhiResult res;
    if (interval.empty) {
        res.status = PhiStatus::EmptyInterval;
        return res;
    }
    const double alpha = std::clamp(state.alpha_diamond(), interval.lo, interval.hi);
    res.alpha_star = alpha;
    if (params.sigma2 == 0.0) {
        res.value = 0.0;
        return res;
    }
    const double coef = (1.0 - params.rho) * static_cast<double>(params.n);
    const double hmax2 = state.h_max() * state.h_max();
    const double l2sq = segment_norms(state, alpha).l2sq;
    const double denom = hmax2 - coef * l2sq;
    if (!(denom > 0.0)) {
        res.status = PhiStatus::DegenerateDenominator;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }
    res.value = coef * params.sigma2 * l2sq / denom;
    return res;
}

SparsityWindow sparsity_window(const AuxParams& params, double lambda) {
    if (11 * params.n > params.d)
        throw std::domain_error("sparsity_window: requires 11 n <= d");
    if (!(lambda > 0.0) || lambda > std::sqrt(std::log(11.0)))
        throw std::domain_error("sparsity_window: requires 0 < lambda <= sqrt(log 11)");

    const double tn = t_quantile(params.n, params.d).t;
    const double tn2 = tn * tn;
    const double hi_target = tn2 + lambda / tn;  // t_s^2 >= this for s_lower
    const double lo_target = tn2 - lambda / tn;  // t_s^2 <= this for s_upper

    auto t2_of = [&](std::uint64_t s) {
        const double t = t_quantile(s, params.d).t;
        return t * t;
    };

    // t_s^2 decreases in s: bisect each predicate boundary.
    std::uint64_t lo = 1, hi = params.n;
    if (t2_of(1) < hi_target)
        throw std::domain_error("sparsity_window: window exits [2, d] on the left");
    while (lo < hi) {  // largest s with t_s^2 >= hi_target
        const std::uint64_t mid = (lo + hi + 1) / 2;
        if (t2_of(mid) >= hi_target) lo = mid;
        else hi = mid - 1;
    }
    SparsityWindow out;
    out.s_lower = lo;

    std::uint64_t lo2 = params.n, hi2 = params.d;
    if (t2_of(params.d) > lo_target)
        throw std::domain_error("sparsity_window: window exits [2, d] on the right");
    while (lo2 < hi2) {  // smallest s with t_s^2 <= lo_target
        const std::uint64_t mid = (lo2 + hi2) / 2;
        if (t2_of(mid) <= lo_target) hi2 = mid;
        else lo2 = mid + 1;
    }
    out.s_upper = lo2;
    if (out.s_lower < 2) throw std::domain_error("sparsity_window: window exits [2, d]");

    const double n = static_cast<double>(params.n);
    out.approx_lower = n * std::exp(-lambda / (2.0 * tn));
    out.approx_upper = n * std::exp(lambda / (2.0 * tn));
    return out;
}

AuxiliaryReport make_auxiliary_report(const PathState& state, AuxParams params,
                                      MBoundVariant variant, double window_lambda) {
    AuxiliaryReport report;
    report.m = m_bound(params, variant);
    if (params.b_localization == 0.0)
        params.b_localization = b_radius(params, variant);
    report.target_rate = params.sigma2 / std::log(static_cast<double>(params.d) /
                                                  static_cast<double>(params.n));
    report.phi_n = phi_n(state, params);
    report.interval = feasible_interval(state, params);
    report.phi_plus = phi_plus(state, params, report.interval);
    report.phi_minus = phi_minus(state, params, report.interval);
    if (window_lambda > 0.0) {
        report.window = sparsity_window(params, window_lambda);
        report.has_window = true;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Brute-force oracle for the original d-dimensional programs.
//
// The d-dimensional programs only see w through <w,H>, ||w||_1, ||w||_2, so
// along a fixed ray {b u : b >= 0} feasibility is monotone in b and the
// constraint boundary can be bisected exactly. The search is therefore a
// simplex lattice over directions u (||u||_1 = 1, u >= 0), each evaluated at
// its exact ray-optimal scale, polished by transfer moves on the simplex
// with shrinking steps. No structure beyond the programs' statements is
// assumed.

namespace {

// All ways to place `total` units into d slots (directions on the simplex).
template <typename Visit>
void enumerate_compositions(std::size_t d, std::size_t total, Visit&& visit) {
    std::vector<std::size_t> parts(d, 0);
    auto rec = [&](auto&& self, std::size_t level, std::size_t remaining) -> void {
        if (level + 1 == d) {
            parts[level] = remaining;
            visit(parts);
            return;
        }
        for (std::size_t v = 0; v <= remaining; ++v) {
            parts[level] = v;
            self(self, level + 1, remaining - v);
        }
    };
    rec(rec, 0, total);
}

double composition_count(std::size_t d, std::size_t total) {
    double c = 1.0;
    for (std::size_t i = 1; i < d; ++i)
        c *= static_cast<double>(total + i) / static_cast<double>(i);
    return c;
}

struct RayOracle {
    const Vector& h;
    AuxProgram program;
    double rho;
    double sigma2;
    double n;
    double b_cap;
    std::size_t evaluations = 0;

    // Smallest feasible scale along u, or a negative value when the whole
    // ray is infeasible. For sigma = 0 a feasible ray starts at b = 0.
    double min_feasible_scale(const Vector& u) {
        ++evaluations;
        double inner = 0.0, l2sq = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            inner += u[i] * h[i];
            l2sq += u[i] * u[i];
        }
        const double sign = program == AuxProgram::Norm ? 1.0 + rho : 1.0 - rho;
        const double coef = inner * inner - sign * n * l2sq;
        if (coef <= 0.0) return sigma2 == 0.0 && coef == 0.0 ? 0.0 : -1.0;
        return std::sqrt(sign * n * sigma2 / coef);
    }

    // Objective at the ray-optimal scale; NaN when the ray is unusable.
    double value_for_direction(const Vector& u, double* scale_out = nullptr) {
        const double bmin = min_feasible_scale(u);
        if (bmin < 0.0) return std::numeric_limits<double>::quiet_NaN();
        double l2sq = 0.0;
        for (double v : u) l2sq += v * v;
        double b = 0.0;
        switch (program) {
            case AuxProgram::Norm:
                b = bmin;
                if (scale_out) *scale_out = b;
                return b;  // ||u||_1 = 1
            case AuxProgram::Minus:
                if (bmin > b_cap * (1.0 + 1e-12)) return std::numeric_limits<double>::quiet_NaN();
                b = bmin;
                break;
            case AuxProgram::Plus:
                if (bmin > b_cap * (1.0 + 1e-12)) return std::numeric_limits<double>::quiet_NaN();
                b = b_cap;
                break;
        }
        if (scale_out) *scale_out = b;
        return b * b * l2sq;
    }

    bool better(double cand, double best) const {
        if (std::isnan(cand)) return false;
        if (std::isnan(best)) return true;
        return program == AuxProgram::Plus ? cand > best : cand < best;
    }
};

} // namespace

OracleResult phi_oracle_small_d(std::span<const double> h_in, AuxProgram program,
                                const AuxParams& params) {
    const std::size_t d = h_in.size();
    if (d == 0 || d > 8) throw std::domain_error("phi_oracle_small_d: requires 1 <= d <= 8");

    Vector h(h_in.begin(), h_in.end());
    for (double& v : h) v = std::fabs(v);
    std::sort(h.begin(), h.end(), std::greater<double>());

    RayOracle oracle{h, program, params.rho, params.sigma2,
                     static_cast<double>(params.n), params.b_localization};
    constexpr std::size_t kEvalCap = 10'000'000;

    OracleResult best;
    best.w.assign(d, 0.0);

    // w = 0 solves Norm (and Minus, inside the l1 cap) exactly when sigma = 0.
    if (params.sigma2 == 0.0 && program != AuxProgram::Plus) {
        best.feasible = true;
        best.value = 0.0;
        best.evaluations = 1;
        return best;
    }

    Vector best_u;
    double best_val = std::numeric_limits<double>::quiet_NaN();

    // Polish on the direction simplex: pairwise mass transfers with
    // shrinking steps, then random tangent perturbations, which keep
    // making progress when the optimum sits on a curved constraint
    // boundary where axis-pair moves stall.
    std::uint64_t noise_state =
        0x9E3779B97F4A7C15ull * (d + 16 * static_cast<std::size_t>(program) + 1);
    auto next_noise = [&noise_state]() {
        noise_state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = noise_state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    };
    auto polish = [&](Vector u, double val) {
        double step = 0.25;
        while (step > 1e-9 && oracle.evaluations < kEvalCap) {
            bool improved = false;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    if (i == j || u[j] < step) continue;
                    Vector cand = u;
                    cand[i] += step;
                    cand[j] -= step;
                    const double cval = oracle.value_for_direction(cand);
                    if (oracle.better(cval, val)) {
                        val = cval;
                        u = std::move(cand);
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        step = 1e-2;
        std::size_t stall = 0;
        while (step > 1e-10 && stall < 4000 && oracle.evaluations < kEvalCap) {
            Vector cand = u;
            double shift = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double delta = step * next_noise();
                cand[i] = std::max(0.0, cand[i] + delta);
                shift += cand[i];
            }
            if (shift <= 0.0) continue;
            for (std::size_t i = 0; i < d; ++i) cand[i] /= shift;
            const double cval = oracle.value_for_direction(cand);
            if (oracle.better(cval, val)) {
                val = cval;
                u = std::move(cand);
                stall = 0;
            } else if (++stall % 400 == 0) {
                step *= 0.5;
            }
        }
        if (oracle.better(val, best_val)) {
            best_val = val;
            best_u = u;
        }
    };

    double prev_value = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t m = 8; m <= 64 && oracle.evaluations < kEvalCap; m *= 2) {
        if (composition_count(d, m) * 2.0 > static_cast<double>(kEvalCap - oracle.evaluations))
            break;
        // Keep several distinct lattice seeds; the polished landscape can
        // have shallow side valleys.
        std::vector<std::pair<double, Vector>> seeds;
        Vector u(d);
        enumerate_compositions(d, m, [&](const std::vector<std::size_t>& parts) {
            for (std::size_t i = 0; i < d; ++i)
                u[i] = static_cast<double>(parts[i]) / static_cast<double>(m);
            const double val = oracle.value_for_direction(u);
            if (std::isnan(val)) return;
            if (oracle.better(val, best_val)) {
                best_val = val;
                best_u = u;
            }
            if (seeds.size() < 6) {
                seeds.emplace_back(val, u);
            } else {
                auto worst = seeds.begin();
                for (auto it = seeds.begin(); it != seeds.end(); ++it)
                    if (oracle.better(worst->first, it->first)) worst = it;
                if (oracle.better(val, worst->first)) *worst = {val, u};
            }
        });
        for (const auto& [val, seed] : seeds) polish(seed, val);

        if (!std::isnan(best_val) && !std::isnan(prev_value)) {
            const double rel =
                std::fabs(best_val - prev_value) / std::max(1e-30, std::fabs(prev_value));
            if (rel <= 5e-4) break;
        }
        prev_value = best_val;
    }

    // Feasibility seeking for Minus when the l1 cap cuts off every lattice
    // ray: descend on the minimal feasible scale itself, then re-polish.
    if (std::isnan(best_val) && program == AuxProgram::Minus) {
        Vector u(d, 0.0);
        u[0] = 1.0;  // the steepest single coordinate
        double bmin = oracle.min_feasible_scale(u);
        double step = 0.25;
        while (step > 1e-9 && oracle.evaluations < kEvalCap) {
            bool improved = false;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    if (i == j || u[j] < step) continue;
                    Vector cand = u;
                    cand[i] += step;
                    cand[j] -= step;
                    const double cb = oracle.min_feasible_scale(cand);
                    if (cb >= 0.0 && (bmin < 0.0 || cb < bmin)) {
                        bmin = cb;
                        u = std::move(cand);
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        const double val = oracle.value_for_direction(u);
        if (oracle.better(val, best_val)) {
            best_val = val;
            best_u = u;
        }
        if (!std::isnan(best_val)) polish(best_u, best_val);
    }

    best.evaluations = oracle.evaluations;
    if (std::isnan(best_val)) return best;  // infeasible

    best.feasible = true;
    best.value = best_val;
    double scale = 0.0;
    oracle.value_for_direction(best_u, &scale);
    for (std::size_t i = 0; i < d; ++i) best.w[i] = scale * best_u[i];
    double inner = 0.0, l2sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        inner += best.w[i] * h[i];
        l2sq += best.w[i] * best.w[i];
    }
    const double sign = program == AuxProgram::Norm ? 1.0 + params.rho : 1.0 - params.rho;
    best.constraint_slack =
        inner * inner - sign * static_cast<double>(params.n) * (params.sigma2 + l2sq);
    return best;
}

} // namespace bpinterp
