#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bpinterp/auxiliary.hpp"
#include "bpinterp/normal_tail.hpp"
#include "test_util.hpp"

using namespace bpinterp;
using bpinterp::testutil::gaussian_vector;

TEST_CASE("localization bound reference values") {
    AuxParams p = AuxParams::make(400, 20000, 1.0);
    const double sketch = m_bound(p, MBoundVariant::ProofSketch);
    // sqrt(400 / (2 log 50 - log log 50 - log pi)), evaluated independently.
    const double denom = 2.0 * std::log(50.0) - std::log(std::log(50.0)) -
                         std::log(std::numbers::pi);
    CHECK(sketch == doctest::Approx(std::sqrt(400.0 / denom)).epsilon(1e-12));
    CHECK(sketch == doctest::Approx(8.674956).epsilon(1e-5));

    const double prop = m_bound(p, MBoundVariant::Proposition);
    CHECK(prop == doctest::Approx(6.826237).epsilon(1e-5));
    // The two variants sit 21.3% apart at this operating point.
    CHECK(std::fabs(prop - sketch) / sketch <= 0.22);
    CHECK(std::fabs(prop - sketch) / sketch >= 0.20);

    p.sigma2 = 0.0;
    CHECK(m_bound(p, MBoundVariant::ProofSketch) == 0.0);
    CHECK(m_bound(p, MBoundVariant::Proposition) == 0.0);

    AuxParams bad = AuxParams::make(100, 1000, 1.0);  // d <= 11 n
    CHECK_THROWS_AS(m_bound(bad, MBoundVariant::ProofSketch), std::domain_error);
}

TEST_CASE("localization radius arithmetic") {
    AuxParams p = AuxParams::make(400, 20000, 1.0);
    const double m = m_bound(p, MBoundVariant::ProofSketch);
    p.s_star = 0.0;
    CHECK(b_radius(p) == doctest::Approx(m).epsilon(1e-14));
    p.s_star = 1.0;
    CHECK(b_radius(p) == doctest::Approx(2.0 + m).epsilon(1e-12));

    AuxParams p4 = p;
    p4.sigma2 = 4.0;
    CHECK(b_radius(p4) == doctest::Approx(2.0 * b_radius(p)).epsilon(1e-12));
}

TEST_CASE("norm program vanishes with the noise") {
    const PathState st = abs_order_stats(gaussian_vector(200, 11));
    AuxParams p = AuxParams::make(4, 200, 0.0);
    const PhiResult r = phi_n(st, p);
    CHECK(r.status == PhiStatus::Ok);
    CHECK(r.value == 0.0);
}

TEST_CASE("norm program scales linearly in sigma") {
    const PathState st = abs_order_stats(gaussian_vector(300, 12));
    AuxParams p = AuxParams::make(5, 300, 1.0);
    p.rho = 0.2;
    const PhiResult base = phi_n(st, p);
    REQUIRE(base.status == PhiStatus::Ok);
    AuxParams p9 = p;
    p9.sigma2 = 9.0;
    const PhiResult tripled = phi_n(st, p9);
    CHECK(tripled.value == doctest::Approx(3.0 * base.value).epsilon(1e-10));
    CHECK(tripled.alpha_star == doctest::Approx(base.alpha_star).epsilon(1e-6));
}

TEST_CASE("norm program matches a dense path grid on a fixed vector") {
    const Vector h{6.0, 5.0, 4.0, 3.0, 2.0, 1.0};
    const PathState st = abs_order_stats(h);
    AuxParams p = AuxParams::make(2, 6, 1.0);
    p.rho = 0.1;
    const PhiResult r = phi_n(st, p);
    REQUIRE(r.status == PhiStatus::Ok);

    // Dense (b, alpha) grid over the cone {b gamma(alpha)/alpha}: b has a
    // closed minimum per alpha, so a fine alpha grid brackets the optimum.
    const double hmax2 = st.h_max() * st.h_max();
    const double coef = (1.0 + p.rho) * 2.0;
    double best = std::numeric_limits<double>::infinity();
    const int grid = 200000;
    for (int i = 0; i <= grid; ++i) {
        const double alpha = 1.0 + (st.alpha_max() - 1.0) * i / grid;
        const SegmentNorms norms = segment_norms(st, alpha);
        const double denom = hmax2 - coef * norms.l2sq;
        if (denom <= 0.0) continue;
        best = std::min(best, std::sqrt(coef * p.sigma2 * alpha * alpha / denom));
    }
    CHECK(std::fabs(r.value - best) <= 1e-3 * best);
    CHECK(r.value <= best + 1e-12);  // the solver may only do better
}

TEST_CASE("norm program reports an empty cone") {
    // One strong coordinate cannot beat (1+rho) n when n is too large.
    const PathState st = abs_order_stats(Vector{1.0, 0.9, 0.8});
    AuxParams p = AuxParams::make(50, 3, 1.0);
    p.rho = 0.2;
    CHECK(phi_n(st, p).status == PhiStatus::InfeasibleEverywhere);
}

TEST_CASE("feasible interval limits") {
    const PathState st = abs_order_stats(gaussian_vector(400, 13));
    AuxParams p = AuxParams::make(8, 400, 1.0);
    p.rho = 0.2;

    p.b_localization = 1e9;
    const FeasibleInterval wide = feasible_interval(st, p);
    REQUIRE_FALSE(wide.empty);
    CHECK(wide.lo == doctest::Approx(1.0).epsilon(1e-9));

    p.b_localization = 1e-9;
    CHECK(feasible_interval(st, p).empty);
}

TEST_CASE("risk maximization value at a left endpoint of one") {
    const Vector h{10.0, 0.8, 0.5, 0.4, 0.2};
    const PathState st = abs_order_stats(h);
    AuxParams p = AuxParams::make(2, 5, 1.0);
    p.rho = 0.1;
    p.b_localization = 1.0;
    const FeasibleInterval interval = feasible_interval(st, p);
    REQUIRE_FALSE(interval.empty);
    REQUIRE(interval.lo == doctest::Approx(1.0).epsilon(1e-9));
    const PhiResult plus = phi_plus(st, p, interval);
    CHECK(plus.value == doctest::Approx(1.0).epsilon(1e-8));  // B^2 * ratio(1) = B^2

    const PhiResult minus = phi_minus(st, p, interval);
    CHECK(minus.status == PhiStatus::Ok);
    CHECK(minus.value <= plus.value);
}

TEST_CASE("risk minimization vanishes with the noise") {
    const PathState st = abs_order_stats(gaussian_vector(300, 14));
    AuxParams p = AuxParams::make(5, 300, 0.0);
    p.rho = 0.2;
    p.b_localization = 2.0;
    const FeasibleInterval interval = feasible_interval(st, p);
    REQUIRE_FALSE(interval.empty);
    CHECK(phi_minus(st, p, interval).value == 0.0);
}

TEST_CASE("empty interval propagates to both risk programs") {
    const PathState st = abs_order_stats(gaussian_vector(200, 15));
    AuxParams p = AuxParams::make(5, 200, 1.0);
    p.rho = 0.2;
    p.b_localization = 1e-9;
    const FeasibleInterval interval = feasible_interval(st, p);
    REQUIRE(interval.empty);
    CHECK(phi_plus(st, p, interval).status == PhiStatus::EmptyInterval);
    CHECK(phi_minus(st, p, interval).status == PhiStatus::EmptyInterval);
}

TEST_CASE("risk programs are ordered and two-homogeneous") {
    for (int rep = 0; rep < 20; ++rep) {
        const PathState st = abs_order_stats(gaussian_vector(120, 4000 + rep));
        AuxParams p = AuxParams::make(4, 120, 0.7);
        p.rho = 0.15;
        p.b_localization = 1.0 + 0.2 * rep;
        const FeasibleInterval interval = feasible_interval(st, p);
        if (interval.empty) continue;
        const PhiResult plus = phi_plus(st, p, interval);
        const PhiResult minus = phi_minus(st, p, interval);
        REQUIRE(minus.status == PhiStatus::Ok);
        CHECK(minus.value <= plus.value * (1.0 + 1e-12));

        // (sigma, B) -> (c sigma, c B) multiplies both by c^2 and phi_n by c.
        const double c = 1.7;
        AuxParams scaled = p;
        scaled.sigma2 *= c * c;
        scaled.b_localization *= c;
        const FeasibleInterval si = feasible_interval(st, scaled);
        REQUIRE_FALSE(si.empty);
        CHECK(si.lo == doctest::Approx(interval.lo).epsilon(1e-7));
        CHECK(si.hi == doctest::Approx(interval.hi).epsilon(1e-7));
        // Endpoint precision is bisection-limited (1e-10 absolute in
        // alpha), which the endpoint-attained value inherits linearly.
        CHECK(phi_plus(st, scaled, si).value ==
              doctest::Approx(c * c * plus.value).epsilon(1e-6));
        CHECK(phi_minus(st, scaled, si).value ==
              doctest::Approx(c * c * minus.value).epsilon(1e-6));

        const PhiResult pn = phi_n(st, p);
        const PhiResult pn_scaled = phi_n(st, scaled);
        if (pn.status == PhiStatus::Ok) {
            CHECK(pn_scaled.value == doctest::Approx(c * pn.value).epsilon(1e-9));
            CHECK(pn_scaled.alpha_star == doctest::Approx(pn.alpha_star).epsilon(1e-6));
        }
    }
}

TEST_CASE("sparsity window against the exact tail counts") {
    AuxParams p = AuxParams::make(400, 20000, 1.0);
    const SparsityWindow w = sparsity_window(p, 1.0);
    // Independent route: s_lower = floor(2 d Phi_c(sqrt(t_n^2 + lambda/t_n)))
    // via the libm complementary error function.
    const double tn = t_quantile(400, 20000).t;
    auto phic = [](double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); };
    const double s_lo_exact = std::floor(40000.0 * phic(std::sqrt(tn * tn + 1.0 / tn)));
    const double s_hi_exact = std::ceil(40000.0 * phic(std::sqrt(tn * tn - 1.0 / tn)));
    CHECK(static_cast<double>(w.s_lower) == s_lo_exact);
    CHECK(static_cast<double>(w.s_upper) == s_hi_exact);
    CHECK(w.approx_lower == doctest::Approx(400.0 * std::exp(-1.0 / (2.0 * tn))).epsilon(1e-12));
    CHECK(w.approx_upper == doctest::Approx(400.0 * std::exp(1.0 / (2.0 * tn))).epsilon(1e-12));
}

TEST_CASE("sparsity window collapses and widens with lambda") {
    AuxParams p = AuxParams::make(400, 20000, 1.0);
    const SparsityWindow tiny = sparsity_window(p, 1e-9);
    CHECK(tiny.s_lower >= 399);
    CHECK(tiny.s_lower <= 400);
    CHECK(tiny.s_upper >= 400);
    CHECK(tiny.s_upper <= 401);

    const SparsityWindow w1 = sparsity_window(p, 0.5);
    const SparsityWindow w2 = sparsity_window(p, 1.0);
    CHECK(w2.s_lower <= w1.s_lower);
    CHECK(w2.s_upper >= w1.s_upper);

    CHECK_THROWS_AS(sparsity_window(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(sparsity_window(p, 2.0), std::domain_error);
    AuxParams bad = AuxParams::make(100, 1000, 1.0);
    CHECK_THROWS_AS(sparsity_window(bad, 1.0), std::domain_error);
}

TEST_CASE("reparametrized programs match the brute-force oracle") {
    for (int rep = 0; rep < 6; ++rep) {
        const Vector h = gaussian_vector(5, 6000 + rep);
        const PathState st = abs_order_stats(h);
        AuxParams p = AuxParams::make(2, 5, 0.5 + 0.3 * rep);
        p.rho = 0.1 + 0.05 * rep;
        p.b_localization = 0.8 + 0.4 * rep;

        const PhiResult pn = phi_n(st, p);
        const OracleResult on = phi_oracle_small_d(h, AuxProgram::Norm, p);
        REQUIRE(pn.status == PhiStatus::Ok);
        REQUIRE(on.feasible);
        CHECK(std::fabs(pn.value - on.value) <= 1e-3 * on.value);

        const FeasibleInterval interval = feasible_interval(st, p);
        const OracleResult op = phi_oracle_small_d(h, AuxProgram::Plus, p);
        const OracleResult om = phi_oracle_small_d(h, AuxProgram::Minus, p);
        REQUIRE(interval.empty == !op.feasible);
        REQUIRE(interval.empty == !om.feasible);
        if (!interval.empty) {
            CHECK(std::fabs(phi_plus(st, p, interval).value - op.value) <= 1e-3 * op.value);
            CHECK(std::fabs(phi_minus(st, p, interval).value - om.value) <= 1e-3 * om.value);
        }
    }
}

TEST_CASE("oracle reports infeasibility when the l1 cap is too small") {
    const Vector h = gaussian_vector(5, 7000);
    const PathState st = abs_order_stats(h);
    AuxParams p = AuxParams::make(2, 5, 1.0);
    p.rho = 0.1;
    p.b_localization = 1e-6;
    REQUIRE(feasible_interval(st, p).empty);
    CHECK_FALSE(phi_oracle_small_d(h, AuxProgram::Plus, p).feasible);
    CHECK_FALSE(phi_oracle_small_d(h, AuxProgram::Minus, p).feasible);
}

TEST_CASE("oracle handles the noiseless programs") {
    const Vector h = gaussian_vector(4, 7100);
    AuxParams p = AuxParams::make(2, 4, 0.0);
    p.rho = 0.1;
    p.b_localization = 1.0;
    const OracleResult on = phi_oracle_small_d(h, AuxProgram::Norm, p);
    REQUIRE(on.feasible);
    CHECK(on.value == 0.0);
}

TEST_CASE("auxiliary report aggregates the individual programs") {
    const PathState st = abs_order_stats(gaussian_vector(1200, 8000));
    AuxParams params = AuxParams::make(100, 1200, 1.0);
    params.rho = 0.3;
    const AuxiliaryReport rep =
        make_auxiliary_report(st, params, MBoundVariant::ProofSketch, 1.0);

    AuxParams filled = params;
    filled.b_localization = b_radius(filled, MBoundVariant::ProofSketch);
    CHECK(rep.m == m_bound(params, MBoundVariant::ProofSketch));
    CHECK(rep.phi_n.value == phi_n(st, filled).value);
    const FeasibleInterval interval = feasible_interval(st, filled);
    CHECK(rep.interval.empty == interval.empty);
    if (!interval.empty) {
        CHECK(rep.interval.lo == interval.lo);
        CHECK(rep.phi_plus.value == phi_plus(st, filled, interval).value);
        CHECK(rep.phi_minus.value == phi_minus(st, filled, interval).value);
    }
    CHECK(rep.target_rate == doctest::Approx(1.0 / std::log(12.0)).epsilon(1e-14));
    REQUIRE(rep.has_window);
    CHECK(rep.window.s_lower < 100);
    CHECK(rep.window.s_upper > 100);
}
