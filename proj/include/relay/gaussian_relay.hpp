#pragma once

// Closed-form capacity bounds for the scalar Gaussian relay channel
// parameterized by the SNR triple (S12, S13, S23): the cutset bound, the
// decode-forward and compress-forward lower bounds, and a strengthened
// cutset upper bound obtained by a three-variable search.

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "relay/info.hpp"
#include "relay/optim.hpp"

namespace relay::gaussian {

struct ScalarRelaySnr {
    double s12 = 0.0;  // sender -> relay
    double s13 = 0.0;  // sender -> receiver
    double s23 = 0.0;  // relay -> receiver

    void validate() const {
        if (!(s12 >= 0.0) || !(s13 >= 0.0) || !(s23 >= 0.0) ||
            !std::isfinite(s12) || !std::isfinite(s13) || !std::isfinite(s23))
            throw std::domain_error("ScalarRelaySnr: SNRs must be finite and nonnegative");
    }
};

/// Cutset bound: the closed two-branch form of the max-min over the input
/// correlation.
inline double cutset_bound(const ScalarRelaySnr& q) {
    q.validate();
    if (q.s12 >= q.s23) {
        double num = std::sqrt(q.s12 * q.s23) +
                     std::sqrt(q.s13 * (q.s13 + q.s12 - q.s23));
        return gaussian_capacity(num * num / (q.s13 + q.s12));
    }
    return gaussian_capacity(q.s13 + q.s12);
}

/// Decode-forward lower bound (Gaussian evaluation).
inline double decode_forward(const ScalarRelaySnr& q) {
    q.validate();
    if (q.s12 >= q.s23 + q.s13) {
        double num = std::sqrt(q.s13 * (q.s12 - q.s23)) +
                     std::sqrt(q.s23 * (q.s12 - q.s13));
        return gaussian_capacity(num * num / q.s12);
    }
    return gaussian_capacity(q.s12);
}

/// Compress-forward lower bound (Gaussian evaluation).
inline double compress_forward(const ScalarRelaySnr& q) {
    q.validate();
    return gaussian_capacity(q.s13 + q.s12 * q.s23 /
                                         (q.s13 + q.s12 + q.s23 + 1.0));
}

/// Larger root of the quadratic
///   lam^2 (S12+1)
///   - lam (S23 S12 (1-rho^2) + S13 + S23 + S12 + 2 + 2 rho sqrt(S13 S23))
///   + (2 rho sqrt(S13 S23) + S13 + S23 + 1) = 0.
/// The discriminant is nonnegative for every valid input; values within
/// -1e-12 of zero are clamped (double root), anything lower is an error.
inline double lambda_max(const ScalarRelaySnr& q, double rho) {
    q.validate();
    if (rho < -1.0 || rho > 1.0)
        throw std::domain_error("lambda_max: |rho| must be <= 1");
    double g = 2.0 * rho * std::sqrt(q.s13 * q.s23);
    double a = q.s12 + 1.0;
    double b = -(q.s23 * q.s12 * (1.0 - rho * rho) + q.s13 + q.s23 + q.s12 + 2.0 + g);
    double c = g + q.s13 + q.s23 + 1.0;
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        if (disc < -1e-12)
            throw std::runtime_error("lambda_max: negative discriminant");
        disc = 0.0;
    }
    return (-b + std::sqrt(disc)) / (2.0 * a);
}

/// One candidate of the strengthened bound's search space. sigma and tcap
/// are derived from (alpha, beta, rho); a point is feasible iff
/// (1-alpha)(1-beta) >= sigma^2 alpha beta and |sigma| <= 1.
struct StrengthenedPoint {
    double alpha = 1.0;
    double beta = 1.0;
    double rho = 0.0;
    double sigma = 0.0;  // derived
    double tcap = 0.0;   // derived scalar cap T > 0
};

/// Rate of the strengthened bound at (alpha, beta, rho), or nullopt when the
/// derived sigma makes the point infeasible. alpha, beta are clipped away
/// from 0 by the search (the sigma formula divides by sqrt(alpha beta)).
inline std::optional<double> strengthened_rate(const ScalarRelaySnr& q,
                                               double alpha, double beta, double rho,
                                               StrengthenedPoint* detail = nullptr) {
    q.validate();
    if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
        throw std::domain_error("strengthened_rate: alpha, beta must lie in [0,1]");
    if (rho < -1.0 || rho > 1.0)
        throw std::domain_error("strengthened_rate: |rho| must be <= 1");

    double r2 = 1.0 - rho * rho;
    double g = 2.0 * rho * std::sqrt(q.s13 * q.s23);
    double t = std::min((1.0 + q.s13 + q.s23 + g) / (r2 * q.s12 + 1.0),
                        lambda_max(q, rho));
    double root = std::sqrt(q.s12 * r2 * alpha * beta);
    if (!(root > 1e-300)) return std::nullopt;  // boundary: sigma blows up
    double sigma = (r2 * alpha * q.s13 + 1.0) / (2.0 * t * root) -
                   (r2 * alpha * q.s12 + beta) / (2.0 * root);
    if (detail) *detail = {alpha, beta, rho, sigma, t};
    if (std::abs(sigma) > 1.0) return std::nullopt;
    if ((1.0 - alpha) * (1.0 - beta) < sigma * sigma * alpha * beta) return std::nullopt;

    double mix = beta + q.s12 * r2 * alpha + 2.0 * sigma * root;
    double var = beta * (1.0 - sigma * sigma);
    if (!(mix > 0.0) || !(var > 0.0)) return std::nullopt;
    return 0.5 * std::log2(r2 * q.s12 + 1.0) - 0.5 * std::log2(mix) +
           0.5 * std::log2(var) + 0.5 * std::log2(r2 * alpha * q.s13 + 1.0);
}

struct SearchConfig {
    int grid_points = 50;      // per coordinate in the grid phase
    int zoom_rounds = 8;       // shrinking local-grid rounds around the best cell
    int polish_rounds = 3;     // coordinate-wise golden-section rounds
    double polish_tol = 1e-10;
    std::uint64_t seed = 0;    // reserved; the search is deterministic
    int threads = 0;           // 0 = hardware concurrency
};

struct StrengthenedResult {
    double value = kNegInf;
    StrengthenedPoint argmax;
};

namespace detail {

inline constexpr double kAlphaFloor = 1e-6;  // keeps the sigma formula finite

struct Best {
    double value = kNegInf;
    double a = 0, b = 0, r = 0;

    void consider(double v, double a_, double b_, double r_) {
        if (v > value ||
            (v == value && std::tie(a_, b_, r_) < std::tie(a, b, r))) {
            value = v; a = a_; b = b_; r = r_;
        }
    }

    void merge(const Best& o) { consider(o.value, o.a, o.b, o.r); }
};

}  // namespace detail

/// Supremum of strengthened_rate over feasible (alpha, beta, rho):
/// feasibility-filtered grid, then coordinate-wise golden-section polish.
/// Deterministic given the config; the grid phase runs in parallel with an
/// order-independent max reduction (ties broken toward the lexicographically
/// smallest (alpha, beta, rho)).
inline StrengthenedResult strengthened_bound(const ScalarRelaySnr& q,
                                             const SearchConfig& cfg = {}) {
    q.validate();
    const int n = std::max(cfg.grid_points, 2);

    // grid lines: linear coverage of [0,1] plus log-spaced points toward the
    // alpha/beta floor (the objective can peak inside a thin feasible sliver
    // where one of them vanishes while sigma stays near zero)
    std::vector<double> ab_grid;
    for (int i = 0; i < n; ++i)
        ab_grid.push_back(std::max(double(i) / double(n - 1), detail::kAlphaFloor));
    for (double e = -5.75; e < -1.0; e += 0.25) ab_grid.push_back(std::pow(10.0, e));
    std::sort(ab_grid.begin(), ab_grid.end());
    std::vector<double> rho_grid;
    for (int i = 0; i < n; ++i) rho_grid.push_back(-1.0 + 2.0 * double(i) / double(n - 1));

    const int rows = int(ab_grid.size());
    const double sliver_cut = 0.03;  // "one of alpha/beta is tiny" basin
    auto scan_rows = [&](int ai_begin, int ai_end) {
        std::pair<detail::Best, detail::Best> best;  // overall, sliver
        for (int ai = ai_begin; ai < ai_end; ++ai) {
            double a = ab_grid[std::size_t(ai)];
            for (double b : ab_grid)
                for (double r : rho_grid)
                    if (auto v = strengthened_rate(q, a, b, r)) {
                        best.first.consider(*v, a, b, r);
                        if (std::min(a, b) <= sliver_cut) best.second.consider(*v, a, b, r);
                    }
        }
        return best;
    };

    unsigned hw = cfg.threads > 0 ? unsigned(cfg.threads)
                                  : std::max(1u, std::thread::hardware_concurrency());
    detail::Best best, sliver;
    if (hw <= 1 || rows < 8) {
        std::tie(best, sliver) = scan_rows(0, rows);
    } else {
        std::vector<std::future<std::pair<detail::Best, detail::Best>>> futs;
        int chunk = (rows + int(hw) - 1) / int(hw);
        for (int lo = 0; lo < rows; lo += chunk)
            futs.push_back(std::async(std::launch::async, scan_rows, lo,
                                      std::min(lo + chunk, rows)));
        for (auto& f : futs) {
            auto [b1, b2] = f.get();
            best.merge(b1);
            sliver.merge(b2);
        }
    }
    // 1-D candidate families along the small-alpha ridge where the derived
    // sigma vanishes: (alpha pinned, beta = 1) and (alpha at the floor,
    // beta = 1/T); both frequently carry the supremum when S13 is small
    {
        const int nf = 2001;
        for (int k = 0; k < nf; ++k) {
            double r = -1.0 + 2.0 * double(k) / double(nf - 1);
            double r2 = 1.0 - r * r;
            double g = 2.0 * r * std::sqrt(q.s13 * q.s23);
            double t = std::min((1.0 + q.s13 + q.s23 + g) / (r2 * q.s12 + 1.0),
                                lambda_max(q, r));
            double denom = r2 * (q.s13 - q.s12 * t);
            if (std::abs(denom) > 1e-300) {
                double a1 = (t - 1.0) / denom;
                if (a1 >= detail::kAlphaFloor && a1 <= 1.0)
                    if (auto v = strengthened_rate(q, a1, 1.0, r)) {
                        best.consider(*v, a1, 1.0, r);
                        sliver.consider(*v, a1, 1.0, r);
                    }
            }
            double b2 = std::min(1.0 / t, 1.0);
            if (auto v = strengthened_rate(q, detail::kAlphaFloor, b2, r)) {
                best.consider(*v, detail::kAlphaFloor, b2, r);
                sliver.consider(*v, detail::kAlphaFloor, b2, r);
            }
        }
    }
    if (best.value == kNegInf)
        throw std::runtime_error("strengthened_bound: no feasible point found");

    double spacing = 1.0 / double(n - 1);
    auto clamped_rate = [&](double aa, double bb, double rr) {
        aa = std::clamp(aa, detail::kAlphaFloor, 1.0);
        bb = std::clamp(bb, detail::kAlphaFloor, 1.0);
        rr = std::clamp(rr, -1.0, 1.0);
        auto v = strengthened_rate(q, aa, bb, rr);
        return v ? *v : kNegInf;
    };

    // shrinking local grids around a start cell; alpha/beta move linearly or
    // multiplicatively depending on the basin type
    auto zoom = [&](detail::Best start, bool log_scale) {
        double a = start.a, b = start.b, r = start.r, val = start.value;
        double lin_w = 1.5 * spacing;
        double log_w = std::log(6.0);
        const int m = 9;
        for (int round = 0; round < cfg.zoom_rounds; ++round) {
            double na_ = a, nb = b, nr_ = r, nv = val;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k) {
                        double ti = 2.0 * i / (m - 1) - 1.0;
                        double tj = 2.0 * j / (m - 1) - 1.0;
                        double tk = 2.0 * k / (m - 1) - 1.0;
                        double aa = log_scale ? a * std::exp(log_w * ti) : a + lin_w * ti;
                        double bb = log_scale ? b * std::exp(log_w * tj) : b + lin_w * tj;
                        double rr = r + lin_w * tk;
                        double v = clamped_rate(aa, bb, rr);
                        if (v > nv) {
                            nv = v;
                            na_ = std::clamp(aa, detail::kAlphaFloor, 1.0);
                            nb = std::clamp(bb, detail::kAlphaFloor, 1.0);
                            nr_ = std::clamp(rr, -1.0, 1.0);
                        }
                    }
            a = na_; b = nb; r = nr_; val = nv;
            lin_w *= 0.35;
            log_w *= 0.5;
        }
        detail::Best out;
        out.consider(val, a, b, r);
        return out;
    };

    detail::Best polished = zoom(best, false);
    if (sliver.value > kNegInf) polished.merge(zoom(sliver, true));

    // coordinate-wise golden-section polish
    double a = polished.a, b = polished.b, r = polished.r, val = polished.value;
    for (int round = 0; round < cfg.polish_rounds; ++round) {
        double width = spacing / std::pow(10.0, round + 1);
        for (int coord = 0; coord < 3; ++coord) {
            double old = coord == 0 ? a : coord == 1 ? b : r;
            double w = coord < 2 ? std::max(width, old * 0.02 / (round + 1.0)) : width;
            double cand = golden_max(
                [&](double t) {
                    double aa = a, bb = b, rr = r;
                    (coord == 0 ? aa : coord == 1 ? bb : rr) = t;
                    return clamped_rate(aa, bb, rr);
                },
                old - w, old + w, cfg.polish_tol);
            double& x = coord == 0 ? a : coord == 1 ? b : r;
            x = std::clamp(cand, coord < 2 ? detail::kAlphaFloor : -1.0, 1.0);
            double v = clamped_rate(a, b, r);
            if (v > val) {
                val = v;
            } else {
                x = old;
            }
        }
    }

    StrengthenedResult res;
    StrengthenedPoint pt;
    auto v = strengthened_rate(q, std::clamp(a, detail::kAlphaFloor, 1.0),
                               std::clamp(b, detail::kAlphaFloor, 1.0),
                               std::clamp(r, -1.0, 1.0), &pt);
    if (v && *v >= val - 1e-15) {
        res.value = *v;
        res.argmax = pt;
    } else {
        res.value = best.value;
        strengthened_rate(q, best.a, best.b, best.r, &res.argmax);
    }
    return res;
}

}  // namespace relay::gaussian
