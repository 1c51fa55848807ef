#pragma once

#include <cstdint>
#include <optional>

namespace bpinterp {

// Scaled complementary error function exp(z^2) erfc(z). Rational minimax
// approximations (Cody, Math. Comp. 1969) up to z = 6/sqrt(2), then the
// Laplace continued fraction for the Mills ratio. Relative accuracy is a
// few ulp away from the branch seams, well inside 1e-13 everywhere.
double erfcx(double z);

// Complementary standard-normal CDF. Returned in extended precision: for
// x around 38 the tail drops below the smallest binary64 subnormal while
// remaining meaningful (and positive) in the 80-bit format.
long double phi_c(double x);

// Mills-ratio factor h with Phi_c(x) = exp(-x^2/2) / (x sqrt(2 pi)) * h(x),
// for x > 0; satisfies 1 - 1/(1+x^2) <= h(x) <= 1.
double h_factor(double x);

// Conditional moments of a standard normal beyond x > 0:
// first = E[Z | Z >= x] = x / h(x), second = E[Z^2 | Z >= x] = 1 + x^2 / h(x).
struct TruncatedMoments {
    double first = 0.0;
    double second = 0.0;
};
TruncatedMoments truncated_moments(double x);

// Quantile t with 2 Phi_c(t) = s/d together with the closed-form estimate
// t_bar = sqrt(2 log(d/s) - log log(d/s) - log(pi/2)) (defined for d/s > e).
struct QuantilePair {
    double t = 0.0;
    std::optional<double> t_bar;
    std::uint64_t s = 0;
    std::uint64_t d = 0;
};

// Safeguarded Newton/bisection to 1e-12 relative in t.
// Throws std::domain_error unless 1 <= s <= d.
QuantilePair t_quantile(std::uint64_t s, std::uint64_t d);

} // namespace bpinterp
