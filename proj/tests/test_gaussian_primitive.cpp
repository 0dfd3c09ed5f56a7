#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relay/gaussian_primitive.hpp"
#include "relay/optim.hpp"
#include "support/oracles.hpp"

using namespace relay;
using namespace relay::primitive;

TEST_CASE("closed-form upper bound at the reference parameters") {
    // S13 = 0.2, S23 = 0.6 family
    auto hi = PrimitiveGaussianParams::from_s23(1.0, 0.2, 0.6);
    CHECK(upper_bound(hi) == Catch::Approx(0.5 * std::log2(1.2 * 1.6)).margin(1e-12));
    auto lo = PrimitiveGaussianParams::from_s23(0.5, 0.2, 0.6);
    CHECK(upper_bound(lo) ==
          Catch::Approx(gaussian_capacity(0.2 + 0.36 / 0.92)).margin(1e-12));
    // C0 = 0 removes the relay
    auto none = PrimitiveGaussianParams::from_snr(1.0, 0.7, 0.0);
    CHECK(upper_bound(none) == Catch::Approx(gaussian_capacity(0.7)).margin(1e-12));
}

TEST_CASE("upper bound is continuous across the regime boundary") {
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        double s13 = rng.log_uniform(0.05, 5.0), c0 = rng.uniform(0.05, 2.0);
        double s23 = std::exp2(2.0 * c0) - 1.0;
        double thresh = s13 + s23 + s13 * s23;
        auto below = PrimitiveGaussianParams::from_snr(thresh * (1.0 - 1e-12), s13, c0);
        auto above = PrimitiveGaussianParams::from_snr(thresh * (1.0 + 1e-12), s13, c0);
        CHECK(std::abs(upper_bound(below) - upper_bound(above)) <= 1e-9);
    }
}

TEST_CASE("decode-forward and compress-forward displays") {
    auto sat = PrimitiveGaussianParams::from_s23(5.0, 0.2, 0.6);  // saturated regime
    CHECK(decode_forward(sat) == Catch::Approx(0.5 * std::log2(1.2 * 1.6)).margin(1e-12));
    auto mid = PrimitiveGaussianParams::from_s23(0.5, 0.2, 0.6);
    CHECK(compress_forward(mid) ==
          Catch::Approx(gaussian_capacity(0.2 + 0.36 / 2.42)).margin(1e-12));
    auto no_obs = PrimitiveGaussianParams::from_s23(0.0, 0.4, 0.8);
    CHECK(compress_forward(no_obs) == Catch::Approx(gaussian_capacity(0.4)).margin(1e-12));
}

TEST_CASE("covariance optimizers") {
    Rng rng(22);
    for (int t = 0; t < 10; ++t) {
        auto pg = PrimitiveGaussianParams::from_snr(rng.log_uniform(0.05, 8.0),
                                                    rng.log_uniform(0.05, 8.0),
                                                    rng.uniform(0.05, 2.0));
        auto cov = optimal_covariance(pg);
        // objective equals the closed-form bound
        CHECK(covariance_objective(pg, cov) == Catch::Approx(upper_bound(pg)).margin(1e-10));
        // link-cost equality
        CHECK(covariance_link_cost(pg, cov) == Catch::Approx(pg.c0).margin(1e-9));
        // rank-one equality
        double p = pg.p(), nr = pg.nr();
        double lhs = (p - cov.k1) * (p + nr - cov.k2);
        double rhs = p - cov.rho * std::sqrt(cov.k1 * cov.k2);
        CHECK(lhs == Catch::Approx(rhs * rhs).margin(1e-9));
        CHECK(cov.k1 >= -1e-12);
        CHECK(cov.k1 <= p + 1e-12);
        // matches the nested grid+polish argmax
        auto grid = oracles::covariance_argmax(pg);
        CHECK(cov.k1 == Catch::Approx(grid.k1).margin(1e-4));
        CHECK(cov.k2 == Catch::Approx(grid.k2).margin(1e-4));
        CHECK(cov.rho == Catch::Approx(grid.rho).margin(1e-4));
    }
    // C0 = 0 degenerates analytically
    auto pg0 = PrimitiveGaussianParams::from_snr(1.3, 0.4, 0.0);
    auto cov0 = optimal_covariance(pg0);
    CHECK(cov0.k1 == Catch::Approx(pg0.p()).margin(1e-12));
    CHECK(cov0.k2 == Catch::Approx(pg0.p() + pg0.nr()).margin(1e-12));
    CHECK(covariance_objective(pg0, cov0) == Catch::Approx(upper_bound(pg0)).margin(1e-10));
}

TEST_CASE("trigonometric bound pieces") {
    auto pg = PrimitiveGaussianParams::from_s23(0.5, 0.2, 0.6);
    // cos omega* solves its quadratic
    for (double theta : {0.9, 1.1, 1.4}) {
        double x = cos_omega_star(pg, theta);
        double ct2 = std::cos(theta) * std::cos(theta);
        double b = (pg.s12 + pg.s13 + ct2) / std::sqrt(pg.s12 * pg.s13);
        double st2 = std::sin(theta) * std::sin(theta);
        CHECK(std::abs(x * x - b * x + st2) <= 1e-10);
        // the smaller root keeps omega inside the admissible interval
        CHECK(x * x < st2);
    }
    // saturated case: theta* = pi/2, cos omega* = sqrt(S13/S12),
    // h = (1/2) log2((S12+1)/(S13+1))
    auto sat = PrimitiveGaussianParams::from_s23(5.0, 0.2, 0.6);
    double co = cos_omega_star(sat, std::numbers::pi / 2.0);
    CHECK(co == Catch::Approx(std::sqrt(sat.s13 / sat.s12)).margin(1e-12));
    double h = h_theta(sat, std::numbers::pi / 2.0, std::acos(co));
    CHECK(h == Catch::Approx(0.5 * std::log2((sat.s12 + 1.0) / (sat.s13 + 1.0))).margin(1e-10));
    // omega outside its half-open interval
    CHECK_THROWS_AS(h_theta(pg, 0.9, 0.1), std::domain_error);
    // sin^2 theta* requires the unsaturated regime
    CHECK_THROWS_AS(sin2_theta_star(sat), std::domain_error);
    CHECK(sin2_theta_star(pg) > 0.0);
    CHECK(sin2_theta_star(pg) <= 1.0);
}

TEST_CASE("trigonometric bound equals the two-branch closed form") {
    // the two independently derived routes coincide
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        double s12 = 0.01 * std::pow(10.0 / 0.01, i / 199.0);
        auto pg = PrimitiveGaussianParams::from_s23(s12, 0.2, 0.6);
        worst = std::max(worst, std::abs(upper_bound(pg) - wu_bound(pg)));
    }
    CHECK(worst <= 1e-8);
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        auto pg = PrimitiveGaussianParams::from_snr(rng.log_uniform(0.01, 10.0),
                                                    rng.log_uniform(0.01, 10.0),
                                                    rng.uniform(0.01, 3.0));
        CHECK(std::abs(upper_bound(pg) - wu_bound(pg)) <= 1e-8);
    }
}

TEST_CASE("trigonometric bound agrees with the nested search") {
    Rng rng(24);
    for (int t = 0; t < 6; ++t) {
        auto pg = PrimitiveGaussianParams::from_snr(rng.log_uniform(0.05, 8.0),
                                                    rng.log_uniform(0.05, 8.0),
                                                    rng.uniform(0.05, 2.0));
        CHECK(wu_bound(pg) == Catch::Approx(oracles::wu_nested_search(pg)).margin(1e-6));
    }
}

TEST_CASE("regime coincidence with decode-forward") {
    Rng rng(25);
    for (int t = 0; t < 50; ++t) {
        double s13 = rng.log_uniform(0.05, 5.0), c0 = rng.uniform(0.05, 2.0);
        double s23 = std::exp2(2.0 * c0) - 1.0;
        double s12 = (s13 + s23 + s13 * s23) * (1.0 + rng.uniform(0.0, 3.0));
        auto pg = PrimitiveGaussianParams::from_snr(s12, s13, c0);
        double expect = gaussian_capacity(s13) + c0;
        CHECK(upper_bound(pg) == Catch::Approx(expect).margin(1e-12));
        CHECK(decode_forward(pg) == Catch::Approx(expect).margin(1e-12));
        CHECK(cutset_bound(pg) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("bound ordering everywhere sampled") {
    Rng rng(26);
    for (int t = 0; t < 60; ++t) {
        auto pg = PrimitiveGaussianParams::from_snr(rng.log_uniform(0.01, 10.0),
                                                    rng.log_uniform(0.01, 10.0),
                                                    rng.uniform(0.0, 3.0));
        double ub = upper_bound(pg);
        CHECK(compress_forward(pg) <= ub + 1e-9);
        CHECK(decode_forward(pg) <= ub + 1e-9);
        CHECK(ub <= cutset_bound(pg) + 1e-9);
    }
}
