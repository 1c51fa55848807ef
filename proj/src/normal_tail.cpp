#include "bpinterp/normal_tail.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpinterp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
constexpr double kInvSqrtPi = 0.56418958354775628694807945156077;

// Cody's rational coefficients.
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                          3209.37758913846947, 0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                          2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                          298.635138197400131,  881.95222124176909,  1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                          1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                          0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                          0.0605183413124413191, 0.00233520497626869185};

// Continued-fraction switch point, z = 6/sqrt(2) in the Phi_c variable.
constexpr double kCfThreshold = 4.2426406871192851464;

// Laplace continued fraction for the Mills ratio Phi_c(x)/phi(x),
//   R(x) = 1 / (x + 1 / (x + 2 / (x + 3 / ...))),
// evaluated bottom-up. 48 levels are far more than needed for x > 6.
long double mills_ratio_cf(long double x) {
    long double r = 0.0L;
    for (int k = 48; k >= 1; --k) r = static_cast<long double>(k) / (x + r);
    return 1.0L / (x + r);
}

double erfcx_nonneg(double z) {
    if (z <= 0.46875) {
        // erf branch, then scale.
        const double zsq = z * z;
        double xnum = kA[4] * zsq;
        double xden = zsq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + kA[i]) * zsq;
            xden = (xden + kB[i]) * zsq;
        }
        const double erf_val = z * (xnum + kA[3]) / (xden + kB[3]);
        return std::exp(zsq) * (1.0 - erf_val);
    }
    if (z <= 4.0) {
        double xnum = kC[8] * z;
        double xden = z;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + kC[i]) * z;
            xden = (xden + kD[i]) * z;
        }
        return (xnum + kC[7]) / (xden + kD[7]);
    }
    if (z <= kCfThreshold) {
        const double ysq = 1.0 / (z * z);
        double xnum = kP[5] * ysq;
        double xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + kP[i]) * ysq;
            xden = (xden + kQ[i]) * ysq;
        }
        const double r = ysq * (xnum + kP[4]) / (xden + kQ[4]);
        return (kInvSqrtPi - r) / z;
    }
    // erfcx(z) = sqrt(2/pi) * R(z sqrt(2)).
    return static_cast<double>(0.79788456080286535588L * mills_ratio_cf(kSqrt2 * static_cast<long double>(z)));
}

} // namespace

double erfcx(double z) {
    if (std::isnan(z)) return z;
    if (z >= 0.0) return erfcx_nonneg(z);
    // erfcx(-z) = 2 exp(z^2) - erfcx(z); overflows past z ~ -26.6.
    const double zsq = z * z;
    if (zsq > 708.0) return HUGE_VAL;
    return 2.0 * std::exp(zsq) - erfcx_nonneg(-z);
}

long double phi_c(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 1.0L - phi_c(-x);
    const long double xl = static_cast<long double>(x);
    const long double half_sq = 0.5L * xl * xl;
    if (x <= 6.0) {
        return 0.5L * static_cast<long double>(erfcx_nonneg(x / kSqrt2)) * expl(-half_sq);
    }
    return expl(-half_sq) / 2.506628274631000502415765284811L * mills_ratio_cf(xl);
}

double h_factor(double x) {
    if (!(x > 0.0)) throw std::domain_error("h_factor: requires x > 0");
    if (x <= 6.0) {
        // h(x) = Phi_c(x) x sqrt(2 pi) exp(x^2/2) = (sqrt(2 pi)/2) x erfcx(x/sqrt(2)).
        return 0.5 * kSqrt2Pi * x * erfcx_nonneg(x / kSqrt2);
    }
    return static_cast<double>(static_cast<long double>(x) * mills_ratio_cf(static_cast<long double>(x)));
}

TruncatedMoments truncated_moments(double x) {
    if (!(x > 0.0)) throw std::domain_error("truncated_moments: requires x > 0");
    // E[Z | Z >= x] = phi(x)/Phi_c(x), written through erfcx so small x
    // does not hit 0/0.
    const double m1 = 0.797884560802865355879892119869 / erfcx(x / kSqrt2);
    return {m1, 1.0 + x * m1};
}

QuantilePair t_quantile(std::uint64_t s, std::uint64_t d) {
    if (s == 0 || s > d) throw std::domain_error("t_quantile: requires 1 <= s <= d");
    QuantilePair out;
    out.s = s;
    out.d = d;

    const long double target = static_cast<long double>(s) / static_cast<long double>(d);
    const double ratio_log = std::log(static_cast<double>(d) / static_cast<double>(s));
    if (ratio_log > 1.0) {
        const double rad = 2.0 * ratio_log - std::log(ratio_log) - std::log(std::numbers::pi / 2.0);
        out.t_bar = std::sqrt(rad);
    }
    if (s == d) {
        out.t = 0.0;
        return out;
    }

    long double lo = 0.0L, hi = 45.0L;  // 2 Phi_c decreasing over the bracket
    long double t = out.t_bar ? static_cast<long double>(*out.t_bar) : 0.5L;
    if (t <= lo || t >= hi) t = 0.5L * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const long double g = 2.0L * phi_c(static_cast<double>(t)) - target;
        if (g > 0.0L) lo = t; else hi = t;
        const long double pdf = expl(-0.5L * t * t) / 2.506628274631000502415765284811L;
        long double step = g / (2.0L * pdf);
        long double t_next = t + step;
        if (!(t_next > lo) || !(t_next < hi)) t_next = 0.5L * (lo + hi);
        const long double delta = fabsl(t_next - t);
        t = t_next;
        if (delta <= 1e-16L + 1e-14L * t) break;
    }
    out.t = static_cast<double>(t);
    return out;
}

} // namespace bpinterp
