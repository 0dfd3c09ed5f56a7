#pragma once

// Bounds for primitive relay channels whose relay output is an i.i.d.
// sequence independent of the sender: the reduced Gaussian evaluation of
// the main upper bound, the Tandon-Ulukus bound and an auxiliary-receiver
// estimate on small discrete channels, and a compress-forward-with-time-
// sharing comparator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "relay/discrete_primitive.hpp"
#include "relay/envelope.hpp"
#include "relay/info.hpp"
#include "relay/optim.hpp"

namespace relay::iid {

struct IidGaussianParams {
    double power = 1.0;  // P
    double n1 = 1.0;     // receiver noise variance
    double nr = 1.0;     // relay observation variance
    double c0 = 0.0;     // relay link capacity, bits

    void validate() const {
        if (!(power > 0.0) || !(n1 > 0.0) || !(nr > 0.0) || !(c0 >= 0.0))
            throw std::domain_error("IidGaussianParams: P, N1, Nr must be positive, C0 >= 0");
    }

    double no_relay_floor() const { return gaussian_capacity(power / (n1 + nr)); }
    double full_relay_ceiling() const { return gaussian_capacity(power / n1); }
};

struct GaussianSearchConfig {
    int k2_points = 2000;       // log-spaced outer grid over K2
    double k2_min_fraction = 1e-9;
    double k1_tol = 1e-13;      // bisection residual target, bits
    int golden_iters = 120;
    std::uint64_t seed = 0;     // reserved; deterministic
};

struct GaussianBoundResult {
    double value = kNegInf;
    double k1 = 0.0, k2 = 0.0, rho = 0.0;
    double link_residual = 0.0;      // equality residual of the C0 constraint
    double covariance_residual = 0.0;  // equality residual of the rank condition
};

namespace detail {

// objective and link constraint of the reduced covariance problem, with the
// covariance equality already substituted: rho sqrt(K1 K2) = sqrt((P-K1)(Nr-K2))
struct GaussInner {
    double p, n1, nr, c0;

    double rho(double k1, double k2) const {
        double r2 = (p - k1) * (nr - k2) / (k1 * k2);
        return std::sqrt(std::max(r2, 0.0));
    }

    // I(V;Yr) - I(V;Y1) - C0 at the covariance-equality point, bits
    double link_residual(double k1, double k2) const {
        double cross = std::sqrt(std::max((p - k1) * (nr - k2), 0.0));
        double var_y1_v = k1 + k2 + 2.0 * cross + n1;
        return 0.5 * std::log2(nr / k2) - 0.5 * std::log2((p + nr + n1) / var_y1_v) - c0;
    }

    double objective(double k1, double k2) const {
        double r = rho(k1, k2);
        if (r > 1.0 + 1e-12) return kNegInf;
        r = std::min(r, 1.0);
        double r2 = 1.0 - r * r;
        if (!(r2 > 0.0)) return kNegInf;
        double s = std::sqrt(k1) + r * std::sqrt(k2);
        return 0.5 * std::log2(1.0 + s * s / (k2 * r2 + n1)) + 0.5 * std::log2(r2);
    }
};

}  // namespace detail

/// Upper bound for the i.i.d.-output Gaussian channel Y1 = X + Yr + Z1,
/// Yr = Zr: the three-variable covariance problem reduced to one dimension
/// using the two equality conditions satisfied by every maximizer. For each
/// K1 on a linear-plus-log grid over (0, P], K2 is pinned by bisection on
/// the link-equality residual (the residual is +inf as K2 -> 0 and negative
/// at K2 = Nr, so a crossing always exists; every sign-change segment of a
/// log subdivision is resolved and the best root kept). The best K1
/// neighborhood is then refined by golden section.
inline GaussianBoundResult gaussian_upper_bound(const IidGaussianParams& pr,
                                                const GaussianSearchConfig& cfg = {}) {
    pr.validate();
    detail::GaussInner in{pr.power, pr.n1, pr.nr, pr.c0};

    // best objective over all K2 roots of the link equality for this K1;
    // rho <= 1 restricts K2 to [Nr (P - K1) / P, Nr]
    auto solve_k2 = [&](double k1, double& out_k2) {
        double k2_lo = std::max(pr.nr * (pr.power - k1) / pr.power,
                                pr.nr * cfg.k2_min_fraction);
        double k2_hi = pr.nr;
        if (!(k2_lo < k2_hi)) return kNegInf;
        const int segs = 64;
        double best = kNegInf;
        double prev = k2_lo, rprev = in.link_residual(k1, prev);
        for (int s = 1; s <= segs; ++s) {
            double cur = k2_lo * std::pow(k2_hi / k2_lo, double(s) / segs);
            double rcur = in.link_residual(k1, cur);
            if (std::isfinite(rprev) && std::isfinite(rcur) &&
                ((rprev > 0) != (rcur > 0) || rprev == 0.0)) {
                double a = prev, b = cur, ra = rprev;
                for (int it = 0; it < 200; ++it) {
                    double m = 0.5 * (a + b);
                    double rm = in.link_residual(k1, m);
                    if (std::abs(rm) < cfg.k1_tol) { a = b = m; break; }
                    if ((rm > 0) == (ra > 0)) { a = m; ra = rm; } else { b = m; }
                }
                double k2 = 0.5 * (a + b);
                double v = in.objective(k1, k2);
                if (v > best) { best = v; out_k2 = k2; }
            }
            prev = cur;
            rprev = rcur;
        }
        return best;
    };

    const int n = std::max(cfg.k2_points, 8);
    std::vector<double> k1_grid;
    for (int i = 1; i <= n; ++i) k1_grid.push_back(pr.power * double(i) / double(n));
    for (double e = -9.0; e < -0.1; e += 0.125) {
        k1_grid.push_back(pr.power * std::pow(10.0, e));          // toward 0
        k1_grid.push_back(pr.power * (1.0 - std::pow(10.0, e)));  // toward P
    }
    std::sort(k1_grid.begin(), k1_grid.end());

    double best_v = kNegInf, best_k1 = pr.power, best_k2 = pr.nr;
    for (double k1 : k1_grid) {
        double k2 = 0.0;
        double v = solve_k2(k1, k2);
        if (v > best_v) { best_v = v; best_k1 = k1; best_k2 = k2; }
    }
    if (best_v == kNegInf)
        throw std::runtime_error("gaussian_upper_bound: no feasible covariance point");

    double span = pr.power / double(n);
    double k1_star = golden_max(
        [&](double k1) {
            double k2 = 0.0;
            return solve_k2(std::clamp(k1, pr.power * 1e-12, pr.power), k2);
        },
        std::max(best_k1 - span, pr.power * 1e-12), std::min(best_k1 + span, pr.power),
        1e-13 * pr.power, cfg.golden_iters);
    {
        double k1 = std::clamp(k1_star, pr.power * 1e-12, pr.power);
        double k2 = 0.0;
        double v = solve_k2(k1, k2);
        if (v > best_v) { best_v = v; best_k1 = k1; best_k2 = k2; }
    }

    GaussianBoundResult res;
    res.value = best_v;
    res.k1 = best_k1;
    res.k2 = best_k2;
    res.rho = in.rho(res.k1, res.k2);
    res.link_residual = std::abs(in.link_residual(res.k1, res.k2));
    res.covariance_residual = std::abs((pr.power - res.k1) * (pr.nr - res.k2) -
                                       res.rho * res.rho * res.k1 * res.k2);
    return res;
}

/// Gaussian-family estimate of the auxiliary-receiver bound for the
/// i.i.d.-output Gaussian channel: T degenerate, W = Yr + noise(nw),
/// V = a X + b Yr + noise(1). A restriction of the bound's maximization,
/// so the returned value never exceeds the true auxiliary-receiver bound.
inline double gaussian_aux_receiver_estimate(const IidGaussianParams& pr,
                                             int grid_points = 33) {
    pr.validate();
    const double p = pr.power, n1 = pr.n1, nr = pr.nr;

    auto evaluate = [&](double nw, double a, double b, bool& feasible) {
        // covariance of (X, Yr, Y1, W, V)
        double k[5][5] = {
            {p, 0.0, p, 0.0, a * p},
            {0.0, nr, nr, nr, b * nr},
            {p, nr, p + nr + n1, nr, a * p + b * nr},
            {0.0, nr, nr, nr + nw, b * nr},
            {a * p, b * nr, a * p + b * nr, b * nr, a * a * p + b * b * nr + 1.0}};
        // conditional covariance of (X, Yr, Y1) given S = (W, V)
        double sww = k[3][3], swv = k[3][4], svv = k[4][4];
        double det = sww * svv - swv * swv;
        feasible = false;
        if (!(det > 1e-300)) return kNegInf;
        double inv[2][2] = {{svv / det, -swv / det}, {-swv / det, sww / det}};
        auto cond = [&](int i, int j) {
            double ais = k[i][3], aiv = k[i][4];
            double ajs = k[j][3], ajv = k[j][4];
            double corr = ais * (inv[0][0] * ajs + inv[0][1] * ajv) +
                          aiv * (inv[1][0] * ajs + inv[1][1] * ajv);
            return k[i][j] - corr;
        };
        double cxx = cond(0, 0), cyy = cond(1, 1), c11 = cond(2, 2);
        double cxy1 = cond(0, 2), cxyr = cond(0, 1);
        if (!(cxx > 0.0) || !(cyy > 0.0) || !(c11 > 0.0)) return kNegInf;
        double i_x_y1 = 0.5 * std::log2(cxx * c11 / (cxx * c11 - cxy1 * cxy1));
        double i_x_yr = 0.5 * std::log2(cxx * cyy / (cxx * cyy - cxyr * cxyr));
        // constraints: I(V,W;Yr) - I(V,W;Y1) <= I(W;Yr) <= C0
        double var_yr_vw = cyy;  // conditioning on S = (W,V)
        double var_y1_vw = c11;
        double cost1 = 0.5 * std::log2(nr / var_yr_vw) -
                       0.5 * std::log2((p + nr + n1) / var_y1_vw);
        double cost2 = 0.5 * std::log2((nr + nw) / nw);
        const double slack = 1e-12;
        if (cost2 > pr.c0 + slack || cost1 > cost2 + slack) return kNegInf;
        feasible = true;
        return i_x_y1 - i_x_yr;
    };

    double nw_min = pr.c0 > 1e-12 ? nr / (std::exp2(2.0 * pr.c0) - 1.0) : 1e12;
    double best = kNegInf;
    double bnw = nw_min, ba = 0.0, bb = 0.0;
    const int n = std::max(grid_points, 5);
    for (int i = 0; i < n; ++i) {
        double nw = nw_min * std::pow(1e6, double(i) / double(n - 1));
        for (int j = 0; j < n; ++j) {
            double a = -2.0 + 4.0 * double(j) / double(n - 1);
            for (int l = 0; l < n; ++l) {
                double b = -4.0 + 8.0 * double(l) / double(n - 1);
                bool ok = false;
                double v = evaluate(nw, a, b, ok);
                if (ok && v > best) { best = v; bnw = nw; ba = a; bb = b; }
            }
        }
    }
    // coordinate golden refinement around the best cell
    for (int round = 0; round < 4; ++round) {
        auto val = [&](double nw, double a, double b) {
            bool ok = false;
            double v = evaluate(std::max(nw, nw_min), a, b, ok);
            return ok ? v : kNegInf;
        };
        bnw = std::max(golden_max([&](double t) { return val(t, ba, bb); },
                                  std::max(bnw * 0.5, nw_min), bnw * 2.0, 1e-12),
                       nw_min);
        ba = golden_max([&](double t) { return val(bnw, t, bb); }, ba - 0.5, ba + 0.5, 1e-12);
        bb = golden_max([&](double t) { return val(bnw, ba, t); }, bb - 0.5, bb + 0.5, 1e-12);
        bool ok = false;
        double v = evaluate(bnw, ba, bb, ok);
        if (ok) best = std::max(best, v);
    }
    return best;
}

/// Discrete i.i.d.-output channel: p(yr) and p(y1 | x, yr) on alphabets of
/// size at most 3, with relay link capacity C0. cond is indexed [x][yr][y1].
struct IidDiscreteChannel {
    std::size_t nx = 2, nyr = 2, ny1 = 2;
    std::vector<double> pyr;
    std::vector<double> cond;  // size nx * nyr * ny1
    double c0 = 0.0;

    double pcond(std::size_t x, std::size_t yr, std::size_t y1) const {
        return cond[(x * nyr + yr) * ny1 + y1];
    }

    void validate() const {
        if (nx < 2 || nx > 3 || nyr < 2 || nyr > 3 || ny1 < 2 || ny1 > 3)
            throw std::invalid_argument("IidDiscreteChannel: alphabets must be 2 or 3");
        if (pyr.size() != nyr || cond.size() != nx * nyr * ny1)
            throw std::invalid_argument("IidDiscreteChannel: table sizes do not match alphabets");
        if (!(c0 >= 0.0))
            throw std::invalid_argument("IidDiscreteChannel: C0 must be nonnegative");
        double s = 0.0;
        for (double v : pyr) {
            if (v < 0.0) throw std::invalid_argument("IidDiscreteChannel: negative p(yr)");
            s += v;
        }
        if (std::abs(s - 1.0) > kNormTol)
            throw std::invalid_argument("IidDiscreteChannel: p(yr) sums to " + std::to_string(s));
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t yr = 0; yr < nyr; ++yr) {
                double r = 0.0;
                for (std::size_t y1 = 0; y1 < ny1; ++y1) {
                    double v = pcond(x, yr, y1);
                    if (v < 0.0)
                        throw std::invalid_argument("IidDiscreteChannel: negative entry");
                    r += v;
                }
                if (std::abs(r - 1.0) > kNormTol)
                    throw std::invalid_argument(
                        "IidDiscreteChannel: row (x=" + std::to_string(x) +
                        ", yr=" + std::to_string(yr) + ") sums to " + std::to_string(r));
            }
    }
};

struct DiscreteSearchConfig {
    int restarts = 16;
    std::size_t nt = 2;  // time-sharing alphabet
    std::size_t nw = 3;  // relay description alphabet
    std::size_t nv = 3;  // inner auxiliary alphabet (auxiliary-receiver bound)
    std::uint64_t seed = 0;
    SimplexAscent::Options ascent{0.5, 1e-6, 0.5, 24};
    int threads = 0;
};

namespace detail {

// joint over up to six axes with masked-marginal entropies
class MultiEval {
public:
    explicit MultiEval(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        std::size_t n = 1;
        for (std::size_t d : dims_) n *= d;
        joint_.assign(n, 0.0);
    }

    std::vector<double>& joint() { return joint_; }

    double h(unsigned mask) const {
        std::size_t n = 1;
        for (std::size_t a = 0; a < dims_.size(); ++a)
            if (mask >> a & 1u) n *= dims_[a];
        scratch_.assign(n, 0.0);
        std::vector<std::size_t> idx(dims_.size(), 0);
        for (std::size_t flat = 0; flat < joint_.size(); ++flat) {
            std::size_t key = 0;
            for (std::size_t a = 0; a < dims_.size(); ++a)
                if (mask >> a & 1u) key = key * dims_[a] + idx[a];
            scratch_[key] += joint_[flat];
            for (std::size_t a = dims_.size(); a-- > 0;) {
                if (++idx[a] < dims_[a]) break;
                idx[a] = 0;
            }
        }
        double out = 0.0;
        for (double p : scratch_) out += xlog2x(p);
        return out;
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<double> joint_;
    mutable std::vector<double> scratch_;
};

}  // namespace detail

struct DiscreteBoundResult {
    double value = kNegInf;
    SimplexAscent::Point argmax;  // block layout documented per evaluator
};

/// Tandon-Ulukus bound:
///   max min{ I(W,X;Y1|T), I(X;Y1|Yr,T) }  s.t.  I(W;Yr|T) <= C0
/// over p(t, x) p(w | yr, t). Blocks: [p(t), p(x|t) rows, p(w|yr,t) rows].
/// `extra_starts` lets a caller inject additional warm starts (for example
/// the projection of an auxiliary-receiver solution, whose value this
/// bound dominates pointwise).
inline DiscreteBoundResult tandon_ulukus_bound(
    const IidDiscreteChannel& ch, const DiscreteSearchConfig& cfg = {},
    const std::vector<SimplexAscent::Point>& extra_starts = {}) {
    ch.validate();
    const std::size_t nt = cfg.nt, nw = cfg.nw;
    // axes: T=0, X=1, Yr=2, Y1=3, W=4
    enum : unsigned { T = 1, X = 2, YR = 4, Y1M = 8, W = 16 };

    auto make_engine = [&]() {
        auto ev = std::make_shared<detail::MultiEval>(
            std::vector<std::size_t>{nt, ch.nx, ch.nyr, ch.ny1, nw});
        auto rebuild = [ev, &ch, nt, nw](const SimplexAscent::Point& pt) {
            auto& j = ev->joint();
            std::size_t i = 0;
            for (std::size_t t = 0; t < nt; ++t)
                for (std::size_t x = 0; x < ch.nx; ++x)
                    for (std::size_t yr = 0; yr < ch.nyr; ++yr)
                        for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
                            double base = pt[0][t] * pt[1 + t][x] * ch.pyr[yr] *
                                          ch.pcond(x, yr, y1);
                            const auto& wrow = pt[1 + nt + t * ch.nyr + yr];
                            for (std::size_t w = 0; w < nw; ++w) j[i++] = base * wrow[w];
                        }
        };
        auto cost = [ev, rebuild](const SimplexAscent::Point& pt) {
            rebuild(pt);
            return ev->h(T | W) + ev->h(T | YR) - ev->h(T | W | YR) - ev->h(T);
        };
        auto obj = [ev, rebuild](const SimplexAscent::Point& pt) {
            rebuild(pt);
            double i_wx_y1 = ev->h(T | W | X) + ev->h(T | Y1M) -
                             ev->h(T | W | X | Y1M) - ev->h(T);
            double i_x_y1_yr = ev->h(T | X | YR) + ev->h(T | YR | Y1M) -
                               ev->h(T | X | YR | Y1M) - ev->h(T | YR);
            return std::min(i_wx_y1, i_x_y1_yr);
        };
        auto repair = [cost, c0 = ch.c0, nt, nyr = ch.nyr](SimplexAscent::Point& pt) {
            const double slack = 1e-11;
            if (cost(pt) <= c0 + slack) return true;
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 30; ++it) {
                double mid = 0.5 * (lo + hi);
                SimplexAscent::Point mixed = pt;
                for (std::size_t r = 0; r < nt * nyr; ++r) {
                    for (double& v : mixed[1 + nt + r]) v *= (1.0 - mid);
                    mixed[1 + nt + r][0] += mid;
                }
                if (cost(mixed) <= c0 + slack) hi = mid; else lo = mid;
            }
            for (std::size_t r = 0; r < nt * nyr; ++r) {
                for (double& v : pt[1 + nt + r]) v *= (1.0 - hi);
                pt[1 + nt + r][0] += hi;
            }
            return cost(pt) <= c0 + slack;
        };
        return std::make_unique<SimplexAscent>(obj, repair, cfg.ascent);
    };

    std::vector<SimplexAscent::Point> starts = extra_starts;
    {
        // degenerate T, W constant; and degenerate T with W trying to copy Yr
        SimplexAscent::Point p;
        p.push_back(std::vector<double>(nt, 0.0));
        p[0][0] = 1.0;
        for (std::size_t t = 0; t < nt; ++t)
            p.push_back(std::vector<double>(ch.nx, 1.0 / double(ch.nx)));
        for (std::size_t r = 0; r < nt * ch.nyr; ++r) {
            p.push_back(std::vector<double>(nw, 0.0));
            p.back()[0] = 1.0;
        }
        starts.push_back(p);
        for (std::size_t t = 0; t < nt; ++t)
            for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                auto& row = p[1 + nt + t * ch.nyr + yr];
                std::fill(row.begin(), row.end(), 0.0);
                row[yr % nw] = 1.0;
            }
        starts.push_back(p);
    }
    for (int r = int(starts.size()); r < cfg.restarts; ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0x2545f491u * std::uint64_t(r) + 1);
        SimplexAscent::Point p;
        p.push_back(rng.simplex(nt));
        for (std::size_t t = 0; t < nt; ++t) p.push_back(rng.simplex(ch.nx));
        for (std::size_t i = 0; i < nt * ch.nyr; ++i) p.push_back(rng.simplex(nw));
        starts.push_back(std::move(p));
    }
    auto best = relay::discrete::detail::run_starts(starts, make_engine, cfg.threads);
    return {best.first, best.second};
}

/// Auxiliary-receiver estimate (constant receiver enhancement):
/// best-found value of I(X;Y1|T,W,V) - I(X;Yr|T,W,V) over
/// p(t,x) p(w|t,yr) p(v|t,x,yr,w) subject to
///   I(V,W;Yr|T) - I(V,W;Y1|T) <= I(W;Yr|T) <= C0.
/// Reduced auxiliary cardinalities make this a lower estimate of the true
/// maximum. Blocks: [p(t), p(x|t) rows, p(w|t,yr) rows, p(v|t,x,yr,w) rows].
inline DiscreteBoundResult aux_receiver_estimate(const IidDiscreteChannel& ch,
                                                 const DiscreteSearchConfig& cfg = {}) {
    ch.validate();
    const std::size_t nt = cfg.nt, nw = cfg.nw, nv = cfg.nv;
    const std::size_t w_rows = nt * ch.nyr;
    const std::size_t v_rows = nt * ch.nx * ch.nyr * nw;
    // axes: T=0, X=1, Yr=2, Y1=3, W=4, V=5
    enum : unsigned { T = 1, X = 2, YR = 4, Y1M = 8, W = 16, V = 32 };

    auto make_engine = [&]() {
        auto ev = std::make_shared<detail::MultiEval>(
            std::vector<std::size_t>{nt, ch.nx, ch.nyr, ch.ny1, nw, nv});
        auto rebuild = [ev, &ch, nt, nw, nv](const SimplexAscent::Point& pt) {
            auto& j = ev->joint();
            std::size_t i = 0;
            for (std::size_t t = 0; t < nt; ++t)
                for (std::size_t x = 0; x < ch.nx; ++x)
                    for (std::size_t yr = 0; yr < ch.nyr; ++yr)
                        for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
                            double base = pt[0][t] * pt[1 + t][x] * ch.pyr[yr] *
                                          ch.pcond(x, yr, y1);
                            const auto& wrow = pt[1 + nt + t * ch.nyr + yr];
                            for (std::size_t w = 0; w < nw; ++w) {
                                double bw = base * wrow[w];
                                const auto& vrow =
                                    pt[1 + nt + nt * ch.nyr +
                                       ((t * ch.nx + x) * ch.nyr + yr) * nw + w];
                                for (std::size_t v = 0; v < nv; ++v) j[i++] = bw * vrow[v];
                            }
                        }
        };
        auto cost_w = [ev, rebuild](const SimplexAscent::Point& pt) {
            rebuild(pt);
            return ev->h(T | W) + ev->h(T | YR) - ev->h(T | W | YR) - ev->h(T);
        };
        auto costs = [ev, rebuild](const SimplexAscent::Point& pt) {
            rebuild(pt);
            double cw = ev->h(T | W) + ev->h(T | YR) - ev->h(T | W | YR) - ev->h(T);
            double cvw = ev->h(T | YR) - ev->h(T | V | W | YR) - ev->h(T | Y1M) +
                         ev->h(T | V | W | Y1M);
            return std::pair<double, double>{cvw, cw};
        };
        auto obj = [ev, rebuild](const SimplexAscent::Point& pt) {
            rebuild(pt);
            return ev->h(T | W | V | Y1M) - ev->h(T | W | V | X | Y1M) -
                   ev->h(T | W | V | YR) + ev->h(T | W | V | X | YR);
        };
        auto repair = [costs, cost_w, c0 = ch.c0, nt, nx = ch.nx, nyr = ch.nyr, nw,
                       w_rows, v_rows](SimplexAscent::Point& pt) {
            const double slack = 1e-11;
            auto mix_w = [&](SimplexAscent::Point& q, double m) {
                for (std::size_t r = 0; r < w_rows; ++r) {
                    for (double& v : q[1 + nt + r]) v *= (1.0 - m);
                    q[1 + nt + r][0] += m;
                }
            };
            auto mix_v = [&](SimplexAscent::Point& q, double m) {
                for (std::size_t r = 0; r < v_rows; ++r) {
                    for (double& v : q[1 + nt + w_rows + r]) v *= (1.0 - m);
                    q[1 + nt + w_rows + r][0] += m;
                }
            };
            if (cost_w(pt) > c0 + slack) {
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 30; ++it) {
                    double mid = 0.5 * (lo + hi);
                    SimplexAscent::Point mixed = pt;
                    mix_w(mixed, mid);
                    if (cost_w(mixed) <= c0 + slack) hi = mid; else lo = mid;
                }
                mix_w(pt, hi);
            }
            auto [cvw, cw] = costs(pt);
            if (cvw > cw + slack) {
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 30; ++it) {
                    double mid = 0.5 * (lo + hi);
                    SimplexAscent::Point mixed = pt;
                    mix_v(mixed, mid);
                    auto [c1, c2] = costs(mixed);
                    if (c1 <= c2 + slack) hi = mid; else lo = mid;
                }
                mix_v(pt, hi);
            }
            auto [c1, c2] = costs(pt);
            return c1 <= c2 + slack && c2 <= c0 + slack;
        };
        return std::make_unique<SimplexAscent>(obj, repair, cfg.ascent);
    };

    std::vector<SimplexAscent::Point> starts;
    {
        // all auxiliaries degenerate: value I(X;Y1) at uniform input
        SimplexAscent::Point p;
        p.push_back(std::vector<double>(nt, 0.0));
        p[0][0] = 1.0;
        for (std::size_t t = 0; t < nt; ++t)
            p.push_back(std::vector<double>(ch.nx, 1.0 / double(ch.nx)));
        for (std::size_t r = 0; r < w_rows; ++r) {
            p.push_back(std::vector<double>(nw, 0.0));
            p.back()[0] = 1.0;
        }
        for (std::size_t r = 0; r < v_rows; ++r) {
            p.push_back(std::vector<double>(nv, 0.0));
            p.back()[0] = 1.0;
        }
        starts.push_back(p);
        // W copying Yr (repaired when C0 is small), V degenerate
        for (std::size_t t = 0; t < nt; ++t)
            for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                auto& row = p[1 + nt + t * ch.nyr + yr];
                std::fill(row.begin(), row.end(), 0.0);
                row[yr % nw] = 1.0;
            }
        starts.push_back(p);
    }
    for (int r = int(starts.size()); r < cfg.restarts; ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0x94d049bbu * std::uint64_t(r) + 1);
        SimplexAscent::Point p;
        p.push_back(rng.simplex(nt));
        for (std::size_t t = 0; t < nt; ++t) p.push_back(rng.simplex(ch.nx));
        for (std::size_t i = 0; i < w_rows; ++i) p.push_back(rng.simplex(nw));
        for (std::size_t i = 0; i < v_rows; ++i) p.push_back(rng.simplex(nv));
        starts.push_back(std::move(p));
    }
    auto best = relay::discrete::detail::run_starts(starts, make_engine, cfg.threads);
    return {best.first, best.second};
}

/// Projects an aux_receiver_estimate argmax onto the Tandon-Ulukus search
/// space (drop the V blocks); the Tandon-Ulukus objective dominates the
/// estimate pointwise at this projection.
inline SimplexAscent::Point project_to_tu(const IidDiscreteChannel& ch,
                                          const DiscreteSearchConfig& cfg,
                                          const SimplexAscent::Point& aux_argmax) {
    SimplexAscent::Point p(aux_argmax.begin(),
                           aux_argmax.begin() + 1 + cfg.nt + cfg.nt * ch.nyr);
    return p;
}

struct CfTimeSharingResult {
    double value = kNegInf;
    double budget_used = 0.0;
};

/// Compress-forward with time sharing for binary-alphabet i.i.d.-output
/// channels. Operating points are (p(x), s) with the symmetric description
/// W = Yr + Bern(s); time sharing is the upper concave envelope of the
/// (cost, rate) cloud, evaluated at the best cost no larger than C0, which
/// realizes every two-point mixture.
inline CfTimeSharingResult compress_forward_time_sharing(const IidDiscreteChannel& ch,
                                                         int q_points = 101,
                                                         int s_points = 101) {
    ch.validate();
    if (ch.nx != 2 || ch.nyr != 2)
        throw std::invalid_argument(
            "compress_forward_time_sharing: binary X and Yr required");

    // rate I(X; Y1, W), cost I(W; Yr | Y1) at one operating point
    detail::MultiEval ev({2, ch.nyr, ch.ny1, 2});  // axes X, Yr, Y1, W
    auto point = [&](double q, double s, double& rate, double& cost) {
        auto& j = ev.joint();
        std::size_t i = 0;
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t yr = 0; yr < ch.nyr; ++yr)
                for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                    for (std::size_t w = 0; w < 2; ++w) {
                        double px = x == 0 ? q : 1.0 - q;
                        double pw = (w == yr) ? 1.0 - s : s;
                        j[i++] = px * ch.pyr[yr] * ch.pcond(x, yr, y1) * pw;
                    }
        enum : unsigned { X = 1, YR = 2, Y1M = 4, W = 8 };
        rate = ev.h(X) + ev.h(Y1M | W) - ev.h(X | Y1M | W);
        cost = ev.h(W | Y1M) + ev.h(YR | Y1M) - ev.h(W | YR | Y1M) - ev.h(Y1M);
    };

    std::vector<std::pair<double, double>> pts;  // (cost, rate)
    for (int qi = 0; qi < q_points; ++qi)
        for (int si = 0; si < s_points; ++si) {
            double q = double(qi) / double(q_points - 1);
            double s = 0.5 * double(si) / double(s_points - 1);
            double rate = 0.0, cost = 0.0;
            point(q, s, rate, cost);
            pts.push_back({cost, rate});
        }
    std::sort(pts.begin(), pts.end());
    std::vector<double> xs, ys;
    for (const auto& [c, r] : pts) {
        if (!xs.empty() && c - xs.back() < 1e-13) {
            ys.back() = std::max(ys.back(), r);
        } else {
            xs.push_back(c);
            ys.push_back(r);
        }
    }
    CfTimeSharingResult res;
    if (xs.size() < 2) {
        res.value = ys.empty() ? kNegInf : ys[0];
        res.budget_used = xs.empty() ? 0.0 : xs[0];
        return res;
    }
    PiecewiseLinearFn env = upper_concave_envelope(xs, ys);
    double cap = std::min(ch.c0, env.breakpoints().back());
    for (std::size_t i = 0; i < env.breakpoints().size(); ++i) {
        if (env.breakpoints()[i] > cap) break;
        if (env.ordinates()[i] > res.value) {
            res.value = env.ordinates()[i];
            res.budget_used = env.breakpoints()[i];
        }
    }
    double at_cap = env(cap);
    if (at_cap > res.value) {
        res.value = at_cap;
        res.budget_used = cap;
    }
    return res;
}

}  // namespace relay::iid
