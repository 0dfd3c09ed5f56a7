#pragma once

// Small deterministic search utilities shared by the bound evaluators:
// golden-section line search, bisection, a 2-D Nelder-Mead polish, a
// seeded RNG with platform-independent uniforms, and a block-coordinate
// ascent engine over products of probability simplices.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace relay {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Golden-section maximization on [a,b]; f should be unimodal there.
template <typename F>
double golden_max(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

template <typename F>
double golden_min(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
    return golden_max([&](double x) { return -f(x); }, a, b, tol, max_iter);
}

/// Bisection for a root of f on [a,b]; requires a sign change.
/// Returns the midpoint of the final bracket.
template <typename F>
double bisect_root(F&& f, double a, double b, double tol = 1e-12, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw std::invalid_argument("bisect_root: no sign change on bracket");
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; fb = fm; }
    }
    return 0.5 * (a + b);
}

/// Nelder-Mead maximization in 2-D with box clamping; used as a local
/// polish from a grid argmax. Deterministic.
template <typename F>
std::pair<double, std::pair<double, double>> nelder_mead_2d_max(
    F&& f, double x0, double y0, double lox, double hix, double loy, double hiy,
    double scale, int max_iter = 200) {
    auto clamp = [](double v, double lo, double hi) {
        return v < lo ? lo : (v > hi ? hi : v);
    };
    struct Pt { double x, y, v; };
    auto eval = [&](double x, double y) {
        x = clamp(x, lox, hix);
        y = clamp(y, loy, hiy);
        return Pt{x, y, f(x, y)};
    };
    Pt s[3] = {eval(x0, y0), eval(x0 + scale, y0), eval(x0, y0 + scale)};
    for (int it = 0; it < max_iter; ++it) {
        // order: s[0] best, s[2] worst
        if (s[0].v < s[1].v) std::swap(s[0], s[1]);
        if (s[0].v < s[2].v) std::swap(s[0], s[2]);
        if (s[1].v < s[2].v) std::swap(s[1], s[2]);
        double spread = std::max(std::abs(s[0].x - s[2].x), std::abs(s[0].y - s[2].y));
        if (spread < 1e-13) break;
        double cx = 0.5 * (s[0].x + s[1].x), cy = 0.5 * (s[0].y + s[1].y);
        Pt refl = eval(cx + (cx - s[2].x), cy + (cy - s[2].y));
        if (refl.v > s[0].v) {
            Pt exp_ = eval(cx + 2.0 * (cx - s[2].x), cy + 2.0 * (cy - s[2].y));
            s[2] = exp_.v > refl.v ? exp_ : refl;
        } else if (refl.v > s[1].v) {
            s[2] = refl;
        } else {
            Pt contr = eval(cx + 0.5 * (s[2].x - cx), cy + 0.5 * (s[2].y - cy));
            if (contr.v > s[2].v) {
                s[2] = contr;
            } else {
                s[1] = eval(s[0].x + 0.5 * (s[1].x - s[0].x), s[0].y + 0.5 * (s[1].y - s[0].y));
                s[2] = eval(s[0].x + 0.5 * (s[2].x - s[0].x), s[0].y + 0.5 * (s[2].y - s[0].y));
            }
        }
    }
    if (s[1].v > s[0].v) std::swap(s[0], s[1]);
    if (s[2].v > s[0].v) std::swap(s[0], s[2]);
    return {s[0].v, {s[0].x, s[0].y}};
}

/// Deterministic RNG: mt19937_64 core with an explicit uniform mapping so
/// that streams do not depend on library-specific distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {
        for (int i = 0; i < 8; ++i) next_u64();  // warm up
    }

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    /// Random point in the probability simplex (exponential spacings).
    std::vector<double> simplex(std::size_t n) {
        std::vector<double> p(n);
        double s = 0.0;
        for (auto& v : p) { v = -std::log(1.0 - uniform()); s += v; }
        for (auto& v : p) v /= s;
        return p;
    }

private:
    std::uint64_t s_;
};

struct AscentOptions {
    double initial_step = 0.5;
    double min_step = 1e-8;
    double step_decay = 0.5;
    int max_rounds_per_step = 64;
};

/// Block-coordinate ascent over a product of probability simplices.
///
/// A candidate point is a list of blocks, each a pmf. Moves mix the active
/// block toward a vertex (and away from one); steps shrink geometrically
/// when no move improves. An optional repair hook projects infeasible
/// candidates back to the feasible set and may reject them.
class SimplexAscent {
public:
    using Point = std::vector<std::vector<double>>;
    using Objective = std::function<double(const Point&)>;
    using Repair = std::function<bool(Point&)>;  // false = unrepairable
    using Options = AscentOptions;

    SimplexAscent(Objective obj, Repair repair = nullptr, Options opt = Options())
        : obj_(std::move(obj)), repair_(std::move(repair)), opt_(opt) {}

    /// Ascend from `start`; returns (value, point). `start` is repaired first;
    /// returns -inf value if it cannot be made feasible.
    std::pair<double, Point> ascend(Point start) const {
        if (repair_ && !repair_(start)) return {kNegInf, std::move(start)};
        double best = obj_(start);
        double step = opt_.initial_step;
        while (step >= opt_.min_step) {
            bool improved_at_step = false;
            for (int round = 0; round < opt_.max_rounds_per_step; ++round) {
                bool improved = false;
                for (std::size_t b = 0; b < start.size(); ++b) {
                    const std::size_t n = start[b].size();
                    if (n < 2) continue;
                    for (std::size_t i = 0; i < 2 * n; ++i) {
                        Point cand = start;
                        auto& blk = cand[b];
                        if (i < n) {
                            for (std::size_t j = 0; j < n; ++j) blk[j] *= (1.0 - step);
                            blk[i] += step;
                        } else {
                            // move away from vertex i-n, clipped to the simplex
                            std::size_t k = i - n;
                            double take = std::min(step, start[b][k]);
                            if (take <= 0.0) continue;
                            double scale = 1.0 / (1.0 - take);
                            for (std::size_t j = 0; j < n; ++j) blk[j] *= scale;
                            blk[k] -= take * scale;
                            if (blk[k] < 0.0) blk[k] = 0.0;
                            double s = 0.0;
                            for (double v : blk) s += v;
                            for (double& v : blk) v /= s;
                        }
                        if (repair_ && !repair_(cand)) continue;
                        double v = obj_(cand);
                        if (v > best + 1e-14) {
                            best = v;
                            start = std::move(cand);
                            improved = true;
                        }
                    }
                }
                if (!improved) break;
                improved_at_step = true;
            }
            (void)improved_at_step;
            step *= opt_.step_decay;
        }
        return {best, std::move(start)};
    }

private:
    Objective obj_;
    Repair repair_;
    Options opt_;
};

}  // namespace relay
