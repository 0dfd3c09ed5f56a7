#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "relay/envelope.hpp"
#include "relay/info.hpp"
#include "relay/optim.hpp"

using namespace relay;

TEST_CASE("entropy of basic laws") {
    CHECK(entropy(ProbTable({4}, {0.25, 0.25, 0.25, 0.25})) == Catch::Approx(2.0).margin(1e-14));
    CHECK(entropy(ProbTable({3}, {1.0, 0.0, 0.0})) == Catch::Approx(0.0).margin(1e-14));
    // direct formula -sum p log2 p
    double expect = -(0.1 * std::log2(0.1) + 0.9 * std::log2(0.9));
    CHECK(entropy(ProbTable({2}, {0.1, 0.9})) == Catch::Approx(expect).margin(1e-14));
}

TEST_CASE("table validation") {
    CHECK_THROWS_AS(ProbTable({2}, {0.6, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(ProbTable({2}, {1.2, -0.2}), std::invalid_argument);
    CHECK_THROWS_AS(ProbTable({2}, {0.5}), std::invalid_argument);
    // sub-tolerance deviation is renormalized
    ProbTable t({2}, {0.5 + 4e-13, 0.5});
    double s = t.values()[0] + t.values()[1];
    CHECK(s == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == Catch::Approx(1.0).margin(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    double expect = -(0.1 * std::log2(0.1) + 0.9 * std::log2(0.9));
    CHECK(binary_entropy(0.1) == Catch::Approx(expect).margin(1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
    // symmetry
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        double x = rng.uniform();
        CHECK(binary_entropy(x) == Catch::Approx(binary_entropy(1.0 - x)).margin(1e-14));
    }
}

TEST_CASE("gaussian capacity") {
    CHECK(gaussian_capacity(0.0) == 0.0);
    CHECK(gaussian_capacity(1.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(gaussian_capacity(3.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK_THROWS_AS(gaussian_capacity(-0.1), std::domain_error);
    // log additivity: C(x) + C(y) = C(x + y + xy)
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        double x = rng.log_uniform(1e-3, 50.0), y = rng.log_uniform(1e-3, 50.0);
        CHECK(gaussian_capacity(x) + gaussian_capacity(y) ==
              Catch::Approx(gaussian_capacity(x + y + x * y)).margin(1e-12));
    }
}

TEST_CASE("mutual information basics") {
    // product law -> zero
    ProbTable prod({2, 2}, {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4});
    CHECK(mutual_information(prod, {0}, {1}) == Catch::Approx(0.0).margin(1e-14));
    // identity channel with uniform input -> 1 bit
    ProbTable ident({2, 2}, {0.5, 0.0, 0.0, 0.5});
    CHECK(mutual_information(ident, {0}, {1}) == Catch::Approx(1.0).margin(1e-14));
    // BSC(0.1) with uniform input -> 1 - H2(0.1)
    ProbTable bsc({2, 2}, {0.45, 0.05, 0.05, 0.45});
    CHECK(mutual_information(bsc, {0}, {1}) ==
          Catch::Approx(1.0 - binary_entropy(0.1)).margin(1e-13));
    CHECK_THROWS_AS(mutual_information(bsc, {0}, {0}), std::invalid_argument);
}

TEST_CASE("mutual information identity on random tables") {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        auto v = rng.simplex(2 * 3 * 2);
        ProbTable joint({2, 3, 2}, v);
        double mi = mutual_information(joint, {0}, {2});
        double viaH = entropy(joint.marginal({0})) + entropy(joint.marginal({2})) -
                      entropy(joint.marginal({0, 2}));
        CHECK(mi == Catch::Approx(viaH).margin(1e-12));
        CHECK(mi >= -1e-12);
        // conditional variant is nonnegative too
        CHECK(mutual_information_given(joint, {0}, {2}, {1}) >= -1e-12);
    }
}

TEST_CASE("entropy properties on random tables") {
    Rng rng(4);
    for (int t = 0; t < 30; ++t) {
        auto v = rng.simplex(6);
        ProbTable p({6}, v);
        // permutation invariance
        std::vector<double> w(v.rbegin(), v.rend());
        CHECK(entropy(p) == Catch::Approx(entropy(ProbTable({6}, w))).margin(1e-12));
        // maximal at uniform
        CHECK(entropy(p) <= std::log2(6.0) + 1e-12);
    }
}

TEST_CASE("upper concave envelope") {
    SECTION("concave input is its own envelope") {
        std::vector<double> xs, ys;
        for (int i = 0; i <= 100; ++i) {
            xs.push_back(i / 100.0);
            ys.push_back(binary_entropy(i / 100.0));
        }
        auto env = upper_concave_envelope(xs, ys);
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(env(xs[i]) == Catch::Approx(ys[i]).margin(1e-12));
    }
    SECTION("chord dominates the dip") {
        auto env = upper_concave_envelope({0.0, 0.5, 1.0}, {0.5, 0.0, 0.5});
        CHECK(env(0.0) == 0.5);
        CHECK(env(0.25) == Catch::Approx(0.5).margin(1e-15));
        CHECK(env(0.5) == Catch::Approx(0.5).margin(1e-15));
        CHECK(env(1.0) == 0.5);
    }
    SECTION("validation") {
        CHECK_THROWS_AS(upper_concave_envelope({0.0, 0.0, 1.0}, {0, 1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(upper_concave_envelope({1.0, 0.0}, {0, 1}), std::invalid_argument);
        CHECK_THROWS_AS(upper_concave_envelope({0.0}, {0}), std::invalid_argument);
    }
    SECTION("dominates samples, slopes nonincreasing on random data") {
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> xs, ys;
            int n = 2 + int(rng.uniform() * 40);
            double x = 0.0;
            for (int i = 0; i < n; ++i) {
                xs.push_back(x);
                ys.push_back(rng.uniform(-1.0, 1.0));
                x += 0.01 + rng.uniform();
            }
            auto env = upper_concave_envelope(xs, ys);
            for (std::size_t i = 0; i < xs.size(); ++i)
                CHECK(env(xs[i]) >= ys[i] - 1e-12);
            const auto& bx = env.breakpoints();
            const auto& by = env.ordinates();
            for (std::size_t i = 2; i < bx.size(); ++i) {
                double s1 = (by[i - 1] - by[i - 2]) / (bx[i - 1] - bx[i - 2]);
                double s2 = (by[i] - by[i - 1]) / (bx[i] - bx[i - 1]);
                CHECK(s2 <= s1 + 1e-9);
            }
            // breakpoints evaluate to their ordinates exactly
            for (std::size_t i = 0; i < bx.size(); ++i) CHECK(env(bx[i]) == by[i]);
        }
    }
    SECTION("outside the domain") {
        auto env = upper_concave_envelope({0.0, 1.0}, {0.0, 1.0});
        CHECK_THROWS_AS(env(-0.1), std::domain_error);
        CHECK_THROWS_AS(env(1.1), std::domain_error);
    }
}
