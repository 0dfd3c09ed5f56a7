#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relay/gaussian_relay.hpp"
#include "relay/optim.hpp"
#include "support/oracles.hpp"

using namespace relay;
using namespace relay::gaussian;

namespace {
const ScalarRelaySnr kFig2{1.2139, 3.7585, 2.0};
}

TEST_CASE("cutset closed form") {
    // S12 <= S23 branch at the reference parameters
    CHECK(cutset_bound(kFig2) ==
          Catch::Approx(gaussian_capacity(3.7585 + 1.2139)).margin(1e-14));
    // S12 = 0 gives C(S13) for any S23
    CHECK(cutset_bound({0.0, 2.0, 1.0}) == Catch::Approx(gaussian_capacity(2.0)).margin(1e-14));
    CHECK(cutset_bound({0.0, 0.3, 0.0}) == Catch::Approx(gaussian_capacity(0.3)).margin(1e-14));
}

TEST_CASE("cutset matches the correlation-grid oracle") {
    Rng rng(11);
    for (int t = 0; t < 8; ++t) {
        double s12 = rng.log_uniform(0.05, 10.0), s13 = rng.log_uniform(0.05, 10.0),
               s23 = rng.log_uniform(0.05, 10.0);
        CHECK(cutset_bound({s12, s13, s23}) ==
              Catch::Approx(oracles::cutset_rho_grid(s12, s13, s23)).margin(1e-6));
    }
    CHECK(cutset_bound(kFig2) ==
          Catch::Approx(oracles::cutset_rho_grid(1.2139, 3.7585, 2.0)).margin(1e-6));
}

TEST_CASE("decode-forward and compress-forward closed forms") {
    CHECK(decode_forward({0.0, 1.0, 2.0}) == Catch::Approx(0.0).margin(1e-14));
    CHECK(compress_forward({1.5, 2.5, 0.0}) ==
          Catch::Approx(gaussian_capacity(2.5)).margin(1e-14));
    // direct evaluation of the display at the reference parameters
    double expect = gaussian_capacity(3.7585 + 1.2139 * 2.0 / (3.7585 + 1.2139 + 2.0 + 1.0));
    CHECK(compress_forward(kFig2) == Catch::Approx(expect).margin(1e-14));
}

TEST_CASE("compress-forward vs decode-forward crossover") {
    // CF >= DF iff S12 (1 + S12) <= S13 (S13 + S23 + 1)
    Rng rng(12);
    int checked = 0;
    while (checked < 60) {
        double s12 = rng.log_uniform(0.05, 10.0), s13 = rng.log_uniform(0.05, 10.0),
               s23 = rng.log_uniform(0.05, 10.0);
        double lhs = s12 * (1.0 + s12), rhs = s13 * (s13 + s23 + 1.0);
        if (std::abs(lhs - rhs) <= 1e-9) continue;  // stay off the boundary
        ScalarRelaySnr q{s12, s13, s23};
        if (lhs < rhs) {
            CHECK(compress_forward(q) >= decode_forward(q));
        } else {
            CHECK(compress_forward(q) <= decode_forward(q));
        }
        ++checked;
    }
}

TEST_CASE("lambda_max") {
    // S12 = 0 factorization
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        double s13 = rng.log_uniform(0.05, 10.0), s23 = rng.log_uniform(0.05, 10.0);
        double rho = rng.uniform(-1.0, 1.0);
        ScalarRelaySnr q{0.0, s13, s23};
        double expect = 1.0 + s13 + s23 + 2.0 * rho * std::sqrt(s13 * s23);
        CHECK(lambda_max(q, rho) == Catch::Approx(expect).margin(1e-10));
    }
    // quadratic residual at the returned root, and root dominance
    for (int t = 0; t < 20; ++t) {
        ScalarRelaySnr q{rng.log_uniform(0.05, 10.0), rng.log_uniform(0.05, 10.0),
                         rng.log_uniform(0.05, 10.0)};
        double rho = rng.uniform(-1.0, 1.0);
        double lam = lambda_max(q, rho);
        double g = 2.0 * rho * std::sqrt(q.s13 * q.s23);
        double a = q.s12 + 1.0;
        double b = -(q.s23 * q.s12 * (1.0 - rho * rho) + q.s13 + q.s23 + q.s12 + 2.0 + g);
        double c = g + q.s13 + q.s23 + 1.0;
        CHECK(std::abs(a * lam * lam + b * lam + c) <= 1e-9 * std::max(1.0, lam * lam));
        double other = (-b - std::sqrt(std::max(b * b - 4 * a * c, 0.0))) / (2 * a);
        CHECK(lam >= other);
    }
    CHECK_THROWS_AS(lambda_max({1, 1, 1}, 1.5), std::domain_error);
}

TEST_CASE("strengthened rate basics") {
    // derived sigma outside [-1,1] is infeasible somewhere on the domain
    StrengthenedPoint pt;
    auto v = strengthened_rate(kFig2, 1.0, 1.0, 0.0, &pt);
    CHECK(std::abs(pt.sigma) > 0.0);  // sigma is pinned, not free
    if (std::abs(pt.sigma) > 1.0) CHECK_FALSE(v.has_value());
    CHECK(pt.tcap > 0.0);
    CHECK_THROWS_AS(strengthened_rate(kFig2, -0.1, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(strengthened_rate(kFig2, 0.5, 0.5, 1.5), std::domain_error);
    // per-point value never exceeds the cutset at the search optimum
    auto r = strengthened_bound(kFig2);
    CHECK(r.value <= cutset_bound(kFig2) + 1e-9);
}

TEST_CASE("strengthened bound against the grid oracle argmax") {
    // re-evaluating the display at the oracle argmax reproduces the oracle value
    auto o = oracles::strengthened_grid(1.2139, 3.7585, 2.0, 0.02);
    auto v = strengthened_rate(kFig2, o.alpha, o.beta, o.rho);
    REQUIRE(v.has_value());
    CHECK(*v == Catch::Approx(o.value).margin(1e-10));
}

TEST_CASE("strengthened bound at the reference parameters") {
    auto r = strengthened_bound(kFig2);
    double cs = cutset_bound(kFig2), cf = compress_forward(kFig2);
    CHECK(r.value > cf);
    CHECK(r.value < cs);
    // grid-oracle agreement
    auto o = oracles::strengthened_grid_refined(1.2139, 3.7585, 2.0);
    CHECK(r.value == Catch::Approx(o.value).margin(1e-3));
    // the returned argmax is feasible and certifies the value
    auto back = strengthened_rate(kFig2, r.argmax.alpha, r.argmax.beta, r.argmax.rho);
    REQUIRE(back.has_value());
    CHECK(*back == Catch::Approx(r.value).margin(1e-12));
}

TEST_CASE("strengthened bound is monotone in S23") {
    double prev = -1.0;
    for (double s23 : {0.2, 0.8, 1.6, 2.8, 4.0}) {
        double v = strengthened_bound({1.2139, 3.7585, s23}).value;
        CHECK(v >= prev - 1e-6);
        prev = v;
    }
}

TEST_CASE("rho search domain can be split and reflected") {
    // the supremum over [-1,1] equals the max of the suprema over the grid
    // restricted to [0,1] and its reflection; per-point symmetry is NOT claimed
    ScalarRelaySnr q{0.9, 1.7, 1.1};
    relay::gaussian::detail::Best full, half;
    for (int i = 0; i <= 80; ++i) {
        double a = std::max(i / 80.0, 1e-6);
        for (int j = 0; j <= 80; ++j) {
            double b = std::max(j / 80.0, 1e-6);
            for (int k = 0; k <= 80; ++k) {
                double r = -1.0 + 2.0 * k / 80.0;
                if (auto v = strengthened_rate(q, a, b, r)) full.consider(*v, a, b, r);
            }
            for (int k = 0; k <= 40; ++k) {
                double r = k / 40.0;
                if (auto v = strengthened_rate(q, a, b, r)) half.consider(*v, a, b, r);
                if (auto v = strengthened_rate(q, a, b, -r)) half.consider(*v, a, b, -r);
            }
        }
    }
    CHECK(full.value == Catch::Approx(half.value).margin(1e-12));
}

TEST_CASE("alpha floor does not clip candidates") {
    // along alpha = 1e-6 every feasible value is dominated by the search result
    ScalarRelaySnr q = kFig2;
    double bound = strengthened_bound(q).value;
    for (int j = 0; j <= 50; ++j) {
        double b = std::max(j / 50.0, 1e-6);
        for (int k = 0; k <= 100; ++k) {
            double r = -1.0 + 2.0 * k / 100.0;
            if (auto v = strengthened_rate(q, 1e-6, b, r)) CHECK(*v <= bound + 1e-9);
        }
    }
}

TEST_CASE("ordering across an SNR sample") {
    Rng rng(14);
    for (int t = 0; t < 12; ++t) {
        ScalarRelaySnr q{rng.uniform(0.2, 6.0), rng.uniform(0.2, 6.0), rng.uniform(0.2, 6.0)};
        double cs = cutset_bound(q), cf = compress_forward(q);
        double v = strengthened_bound(q).value;
        CHECK(cf <= v + 1e-6);
        CHECK(v <= cs + 1e-6);
    }
}
