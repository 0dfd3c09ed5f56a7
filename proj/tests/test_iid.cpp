#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relay/iid_output.hpp"

using namespace relay;
using namespace relay::iid;

namespace {

// Y1 = X * Yr xor N with Yr ~ Bern(1/2), N ~ Bern(delta), all binary
IidDiscreteChannel product_noise_channel(double c0, double delta = 0.1) {
    IidDiscreteChannel ch;
    ch.nx = 2;
    ch.nyr = 2;
    ch.ny1 = 2;
    ch.pyr = {0.5, 0.5};
    ch.c0 = c0;
    ch.cond.assign(8, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int yr = 0; yr < 2; ++yr)
            for (int y1 = 0; y1 < 2; ++y1)
                ch.cond[std::size_t((x * 2 + yr) * 2 + y1)] =
                    (y1 == (x & yr)) ? 1.0 - delta : delta;
    return ch;
}

const DiscreteSearchConfig kCfg{12, 2, 3, 3, 5, {0.5, 1e-6, 0.5, 24}, 0};

}  // namespace

TEST_CASE("gaussian parameter validation") {
    CHECK_THROWS_AS((IidGaussianParams{0.0, 1.0, 1.0, 0.1}).validate(), std::domain_error);
    CHECK_THROWS_AS((IidGaussianParams{1.0, 1.0, 1.0, -0.1}).validate(), std::domain_error);
    CHECK_NOTHROW((IidGaussianParams{1.0, 1.0, 1.0, 0.0}).validate());
}

TEST_CASE("gaussian bound limits") {
    for (auto [p, n1, nr] : {std::tuple{1.0, 1.0, 1.0}, {1.0, 0.5, 2.0}, {2.0, 1.0, 0.5}}) {
        IidGaussianParams pr{p, n1, nr, 10.0};
        auto hi = gaussian_upper_bound(pr);
        CHECK(hi.value <= pr.full_relay_ceiling() + 1e-9);
        CHECK(hi.value >= pr.full_relay_ceiling() - 0.01);
        pr.c0 = 0.0;
        auto lo = gaussian_upper_bound(pr);
        CHECK(lo.value >= pr.no_relay_floor() - 1e-6);
        CHECK(lo.value <= pr.no_relay_floor() + 1e-6);
    }
}

TEST_CASE("gaussian bound equality residuals and monotonicity") {
    for (auto [p, n1, nr] : {std::tuple{1.0, 1.0, 1.0}, {1.0, 0.5, 2.0}, {2.0, 1.0, 0.5}}) {
        double prev = -1.0;
        for (int k = 0; k <= 10; ++k) {
            IidGaussianParams pr{p, n1, nr, 0.15 * k};
            auto r = gaussian_upper_bound(pr);
            CHECK(r.link_residual <= 1e-8);
            CHECK(r.covariance_residual <= 1e-8);
            CHECK(r.rho >= 0.0);
            CHECK(r.rho <= 1.0);
            CHECK(r.value >= prev - 1e-9);
            CHECK(r.value >= pr.no_relay_floor() - 1e-6);
            CHECK(r.value <= pr.full_relay_ceiling() + 1e-6);
            prev = r.value;
        }
    }
    // monotone in P as well
    double prev = -1.0;
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
        auto r = gaussian_upper_bound({p, 1.0, 1.0, 0.5});
        CHECK(r.value >= prev - 1e-9);
        prev = r.value;
    }
}

TEST_CASE("gaussian-family estimate stays below the main bound") {
    for (auto [p, n1, nr] : {std::tuple{1.0, 1.0, 1.0}, {1.0, 0.5, 2.0}}) {
        for (double c0 : {0.2, 0.8}) {
            IidGaussianParams pr{p, n1, nr, c0};
            double main_bound = gaussian_upper_bound(pr).value;
            double estimate = gaussian_aux_receiver_estimate(pr, 21);
            CHECK(estimate <= main_bound + 1e-6);
            INFO("observed gap " << main_bound - estimate);
            CHECK(estimate > 0.0);
        }
    }
}

TEST_CASE("discrete channel validation") {
    auto ch = product_noise_channel(0.3);
    CHECK_NOTHROW(ch.validate());
    ch.pyr = {0.6, 0.6};
    CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
    ch = product_noise_channel(0.3);
    ch.cond[0] = 0.4;  // break a row
    CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
}

TEST_CASE("tandon-ulukus bound basics") {
    auto ch = product_noise_channel(0.0);
    auto cfg = kCfg;
    auto v0 = tandon_ulukus_bound(ch, cfg);
    // C0 = 0 forces a useless description; the bound reduces to
    // max min{ I(X;Y1|T), I(X;Y1|Yr,T) }
    CHECK(v0.value > 0.0);
    CHECK(v0.value < 0.5);
    // degenerate-T warm start keeps the bound at least the T-free value
    auto one_t = cfg;
    one_t.nt = 1;
    auto v_not = tandon_ulukus_bound(ch, one_t);
    CHECK(v0.value >= v_not.value - 1e-6);
    // larger budget never hurts
    auto v3 = tandon_ulukus_bound(product_noise_channel(0.3), cfg);
    CHECK(v3.value >= v0.value - 1e-9);
}

TEST_CASE("auxiliary-receiver estimate ordering") {
    for (double c0 : {0.1, 0.3, 0.5}) {
        auto ch = product_noise_channel(c0);
        auto aux = aux_receiver_estimate(ch, kCfg);
        auto tu = tandon_ulukus_bound(ch, kCfg, {project_to_tu(ch, kCfg, aux.argmax)});
        CHECK(aux.value <= tu.value + 1e-9);
        // never below the all-degenerate restart value I(X;Y1)
        detail::MultiEval ev({2, ch.nyr, ch.ny1});
        auto& j = ev.joint();
        std::size_t i = 0;
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t yr = 0; yr < ch.nyr; ++yr)
                for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                    j[i++] = 0.5 * ch.pyr[yr] * ch.pcond(x, yr, y1);
        double ixy1 = ev.h(1u) + ev.h(4u) - ev.h(5u);
        CHECK(aux.value >= ixy1 - 1e-6);
        // deterministic given the seed
        auto again = aux_receiver_estimate(ch, kCfg);
        CHECK(again.value == aux.value);
    }
}

TEST_CASE("compress-forward with time sharing stays below the outer bound") {
    for (double c0 : {0.1, 0.3, 0.5}) {
        auto ch = product_noise_channel(c0);
        auto cfts = compress_forward_time_sharing(ch);
        auto tu = tandon_ulukus_bound(ch, kCfg);
        INFO("time-sharing gap " << tu.value - cfts.value);
        CHECK(cfts.value <= tu.value + 1e-9);
        CHECK(cfts.value > 0.0);
        CHECK(cfts.budget_used <= c0 + 1e-9);
    }
    // the mixture value never falls below the best single feasible point
    auto ch = product_noise_channel(0.25);
    auto cfts = compress_forward_time_sharing(ch, 41, 41);
    auto fine = compress_forward_time_sharing(ch, 101, 101);
    CHECK(fine.value >= cfts.value - 1e-9);
}
