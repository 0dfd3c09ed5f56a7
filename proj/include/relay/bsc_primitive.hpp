#pragma once

// Upper bound for the symmetric binary primitive relay channel via the
// g_lambda family and its 1-D upper concave envelope, plus a
// compress-forward lower bound over the symmetric test-channel family.

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <vector>

#include "relay/envelope.hpp"
#include "relay/info.hpp"
#include "relay/optim.hpp"

namespace relay::bsc {

struct BscParams {
    double rho = 0.0;  // crossover probability of both component channels
    double c0 = 0.0;   // relay link capacity, bits

    void validate() const {
        if (!(rho >= 0.0) || rho > 0.5)
            throw std::domain_error("BscParams: rho must lie in [0, 1/2]");
        if (!(c0 >= 0.0))
            throw std::domain_error("BscParams: C0 must be nonnegative");
    }
};

struct Grids {
    int lambda_points = 101;  // lambda grid on [0,1]
    int c_points = 401;       // envelope abscissae on [0,1]
    int inner_points = 201;   // per axis of the inner 2-D maximization
    int threads = 0;          // 0 = hardware concurrency
};

namespace detail {

// objective split f = A + (1-lambda) * B with
//   A = H(Yr|X),  B = H(Y1) - H(Yr)
// at the joint (p00, p01, p10, p11) with p10 = c - p01, p11 = 1 - c - p00.
struct FParts {
    double a, b;
};

inline FParts f_parts(double rho, double c, double p01, double p00) {
    p01 = std::clamp(p01, 0.0, c);
    p00 = std::clamp(p00, 0.0, 1.0 - c);
    double p10 = c - p01;
    double q = p00 + p01;  // P(X = 0)
    double yr1 = p01 + (1.0 - c - p00);
    double hy1 = binary_entropy(std::clamp(rho + q * (1.0 - 2.0 * rho), 0.0, 1.0));
    double hyr = binary_entropy(std::clamp(yr1, 0.0, 1.0));
    double hyrx = 0.0;
    if (q > kZeroTol) hyrx += q * binary_entropy(std::clamp(p01 / q, 0.0, 1.0));
    if (1.0 - q > kZeroTol)
        hyrx += (1.0 - q) * binary_entropy(std::clamp(p10 / (1.0 - q), 0.0, 1.0));
    return {hyrx, hy1 - hyr};
}

inline double f_value(double rho, double lambda, double c, double p01, double p00) {
    FParts p = f_parts(rho, c, p01, p00);
    return p.a + (1.0 - lambda) * p.b;
}

// scan the inner grid once per c; keep the (B, A) upper hull so the grid
// maximum of A + mu*B is available for every mu = 1 - lambda at once
struct HullVertex {
    double b, a;      // coordinates of the support point
    double p01, p00;  // the cell it came from (polish start)
};

inline std::vector<HullVertex> inner_hull(double rho, double c, int m) {
    std::vector<HullVertex> pts;
    pts.reserve(std::size_t(m) * std::size_t(m));
    int mi = c > 0.0 ? m : 1;
    int mj = (1.0 - c) > 0.0 ? m : 1;
    for (int i = 0; i < mi; ++i) {
        double p01 = mi == 1 ? 0.0 : c * double(i) / double(mi - 1);
        for (int j = 0; j < mj; ++j) {
            double p00 = mj == 1 ? 0.0 : (1.0 - c) * double(j) / double(mj - 1);
            FParts f = f_parts(rho, c, p01, p00);
            pts.push_back({f.b, f.a, p01, p00});
        }
    }
    std::sort(pts.begin(), pts.end(), [](const HullVertex& l, const HullVertex& r) {
        return l.b < r.b || (l.b == r.b && l.a < r.a);
    });
    // dedupe equal b keeping the largest a
    std::vector<HullVertex> uniq;
    for (const auto& p : pts) {
        if (!uniq.empty() && uniq.back().b == p.b) {
            if (p.a > uniq.back().a) uniq.back() = p;
        } else {
            uniq.push_back(p);
        }
    }
    std::vector<HullVertex> hull;
    for (const auto& p : uniq) {
        while (hull.size() >= 2) {
            const auto& s = hull[hull.size() - 2];
            const auto& t = hull[hull.size() - 1];
            double cross = (t.b - s.b) * (p.a - s.a) - (t.a - s.a) * (p.b - s.b);
            if (cross >= 0.0) hull.pop_back(); else break;
        }
        hull.push_back(p);
    }
    return hull;
}

inline const HullVertex& hull_argmax(const std::vector<HullVertex>& hull, double mu) {
    std::size_t best = 0;
    double bv = hull[0].a + mu * hull[0].b;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        double v = hull[i].a + mu * hull[i].b;
        if (v > bv) { bv = v; best = i; }
    }
    return hull[best];
}

}  // namespace detail

/// g_lambda(c): maximum of (1-lambda)(H(Y1) - H(Yr)) + H(Yr|X) over joint
/// pmfs p(x, yr) with p(0,1) + p(1,0) = c; the component channel to the
/// receiver is a BSC(rho). Grid over (p01, p00) plus one Nelder-style
/// polish from the best cell.
inline double g_lambda(double rho, double lambda, double c, int inner_points = 201) {
    if (!(c >= 0.0) || c > 1.0)
        throw std::domain_error("g_lambda: c must lie in [0,1]");
    if (!(lambda >= 0.0) || lambda > 1.0)
        throw std::domain_error("g_lambda: lambda must lie in [0,1]");
    auto hull = detail::inner_hull(rho, c, inner_points);
    const auto& v = detail::hull_argmax(hull, 1.0 - lambda);
    double grid_best = v.a + (1.0 - lambda) * v.b;
    double scale = std::max(c, 1.0 - c) / double(std::max(inner_points - 1, 1));
    auto polished = nelder_mead_2d_max(
        [&](double p01, double p00) { return detail::f_value(rho, lambda, c, p01, p00); },
        v.p01, v.p00, 0.0, c, 0.0, 1.0 - c, scale);
    return std::max(grid_best, polished.first);
}

/// Precomputes, for one crossover rho, the envelope value of every
/// g_lambda at c = rho; bounds for any C0 are then closed-form in the
/// cached table.
class Evaluator {
public:
    Evaluator(double rho, Grids grids = {}) : rho_(rho), grids_(grids) {
        BscParams{rho, 0.0}.validate();
        const int nl = std::max(grids_.lambda_points, 2);
        const int nc = std::max(grids_.c_points, 2);
        const int m = std::max(grids_.inner_points, 2);
        lambdas_.resize(nl);
        for (int j = 0; j < nl; ++j) lambdas_[j] = double(j) / double(nl - 1);
        std::vector<double> cs(nc);
        for (int i = 0; i < nc; ++i) cs[i] = double(i) / double(nc - 1);

        // g_table[j][i] = g_{lambda_j}(c_i)
        std::vector<std::vector<double>> g_table(nl, std::vector<double>(nc));
        unsigned hw = grids_.threads > 0 ? unsigned(grids_.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
        auto work = [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i) {
                auto hull = detail::inner_hull(rho_, cs[i], m);
                double scale = std::max(cs[i], 1.0 - cs[i]) / double(m - 1);
                for (int j = 0; j < nl; ++j) {
                    const auto& v = detail::hull_argmax(hull, 1.0 - lambdas_[j]);
                    double best = v.a + (1.0 - lambdas_[j]) * v.b;
                    auto polished = nelder_mead_2d_max(
                        [&](double p01, double p00) {
                            return detail::f_value(rho_, lambdas_[j], cs[i], p01, p00);
                        },
                        v.p01, v.p00, 0.0, cs[i], 0.0, 1.0 - cs[i], scale, 80);
                    g_table[j][i] = std::max(best, polished.first);
                }
            }
        };
        if (hw <= 1) {
            work(0, nc);
        } else {
            std::vector<std::future<void>> futs;
            int chunk = (nc + int(hw) - 1) / int(hw);
            for (int lo = 0; lo < nc; lo += chunk)
                futs.push_back(std::async(std::launch::async, work, lo,
                                          std::min(lo + chunk, nc)));
            for (auto& f : futs) f.get();
        }

        env_at_rho_.resize(nl);
        for (int j = 0; j < nl; ++j)
            env_at_rho_[j] = upper_concave_envelope(cs, g_table[j])(rho_);
    }

    double rho() const { return rho_; }
    const std::vector<double>& lambdas() const { return lambdas_; }

    /// Bound value 1 - 2 H2(rho) + lambda C0 + envelope[g_lambda](rho) for
    /// the nearest lambda grid point.
    double bound(double c0, double lambda) const {
        std::size_t j = nearest_lambda(lambda);
        return base() + lambdas_[j] * c0 + env_at_rho_[j];
    }

    struct Best {
        double value;
        double lambda;
    };

    /// Tightest bound over the lambda grid.
    Best best(double c0) const {
        Best b{std::numeric_limits<double>::infinity(), 0.0};
        for (std::size_t j = 0; j < lambdas_.size(); ++j) {
            double v = base() + lambdas_[j] * c0 + env_at_rho_[j];
            if (v < b.value) { b.value = v; b.lambda = lambdas_[j]; }
        }
        return b;
    }

    double envelope_at_rho(double lambda) const { return env_at_rho_[nearest_lambda(lambda)]; }

private:
    double base() const { return 1.0 - 2.0 * binary_entropy(rho_); }

    std::size_t nearest_lambda(double lambda) const {
        if (!(lambda >= 0.0) || lambda > 1.0)
            throw std::domain_error("Evaluator: lambda must lie in [0,1]");
        double step = lambdas_.size() > 1 ? lambdas_[1] - lambdas_[0] : 1.0;
        auto j = std::size_t(std::llround(lambda / step));
        return std::min(j, lambdas_.size() - 1);
    }

    double rho_;
    Grids grids_;
    std::vector<double> lambdas_;
    std::vector<double> env_at_rho_;
};

/// Upper bound at a single lambda (builds a throwaway evaluator; prefer
/// Evaluator for sweeps).
inline double upper_bound(const BscParams& p, double lambda, Grids grids = {}) {
    p.validate();
    return Evaluator(p.rho, grids).bound(p.c0, lambda);
}

/// Tightest upper bound over the lambda grid.
inline Evaluator::Best best_upper_bound(const BscParams& p, Grids grids = {}) {
    p.validate();
    return Evaluator(p.rho, grids).best(p.c0);
}

struct CfResult {
    double value;
    double s;  // test-channel crossover achieving it
};

namespace detail {

// joint over (X, Y1, Yr, V): X uniform, Y1 = X + Bern(rho),
// Yr = X + Bern(rho), V = Yr + Bern(s)
inline ProbTable cf_joint(double rho, double s) {
    std::vector<double> vals(16);
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int yr = 0; yr < 2; ++yr)
                for (int v = 0; v < 2; ++v) {
                    double p = 0.5;
                    p *= (y1 ^ x) ? rho : 1.0 - rho;
                    p *= (yr ^ x) ? rho : 1.0 - rho;
                    p *= (v ^ yr) ? s : 1.0 - s;
                    vals[std::size_t(((x * 2 + y1) * 2 + yr) * 2 + v)] = p;
                }
    return ProbTable({2, 2, 2, 2}, std::move(vals));
}

inline double cf_rate(double rho, double s) {
    return mutual_information(cf_joint(rho, s), {0}, {1, 3});
}

inline double cf_cost(double rho, double s) {
    return mutual_information_given(cf_joint(rho, s), {3}, {2}, {1});
}

}  // namespace detail

/// Compress-forward lower bound with uniform input and the symmetric test
/// channel V = Yr + Bern(s): max over s in [0, 1/2] of I(X; Y1, V) subject
/// to I(V; Yr | Y1) <= C0. A restriction of the compress-forward optimum,
/// hence still an achievable rate (and possibly an under-estimate).
inline CfResult compress_forward(const BscParams& p, int s_points = 1001) {
    p.validate();
    const double slack = 1e-12;
    CfResult best{detail::cf_rate(p.rho, 0.5), 0.5};  // always feasible
    int n = std::max(s_points, 2);
    double prev_s = 0.5;
    bool prev_feasible = true;
    for (int i = n - 1; i >= 0; --i) {
        double s = 0.5 * double(i) / double(n - 1);
        bool ok = detail::cf_cost(p.rho, s) <= p.c0 + slack;
        if (ok) {
            double v = detail::cf_rate(p.rho, s);
            if (v > best.value) best = {v, s};
            prev_s = s;
            prev_feasible = true;
        } else {
            if (prev_feasible) {
                // refine the feasibility boundary between s and prev_s
                double lo = s, hi = prev_s;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (detail::cf_cost(p.rho, mid) <= p.c0 + slack) hi = mid; else lo = mid;
                }
                double v = detail::cf_rate(p.rho, hi);
                if (v > best.value) best = {v, hi};
            }
            prev_feasible = false;
        }
    }
    return best;
}

}  // namespace relay::bsc
