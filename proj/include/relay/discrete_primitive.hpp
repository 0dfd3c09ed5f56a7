#pragma once

// Numeric bound evaluation for small discrete primitive relay channels
// p(y1, yr | x) with a noiseless relay link of capacity C0: the main upper
// bound and compress-forward in their auxiliary-variable forms, the cutset
// bound, a genericity test, an exhaustive quantized search oracle, and
// conditional graph entropy for deterministic channels.

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "relay/info.hpp"
#include "relay/lp.hpp"
#include "relay/optim.hpp"

namespace relay::discrete {

/// p(y1, yr | x) on small alphabets plus the relay-link capacity C0.
/// cond is indexed [x][y1][yr] flattened; every x-slice is a pmf.
struct PrimitiveChannel {
    std::size_t nx = 2, ny1 = 2, nyr = 2;
    std::vector<double> cond;  // size nx * ny1 * nyr
    double c0 = 0.0;

    double p(std::size_t x, std::size_t y1, std::size_t yr) const {
        return cond[(x * ny1 + y1) * nyr + yr];
    }

    void validate() const {
        if (nx < 2 || ny1 < 2 || nyr < 2)
            throw std::invalid_argument("PrimitiveChannel: alphabet sizes must be >= 2");
        if (cond.size() != nx * ny1 * nyr)
            throw std::invalid_argument("PrimitiveChannel: table size does not match alphabets");
        if (!(c0 >= 0.0))
            throw std::invalid_argument("PrimitiveChannel: C0 must be nonnegative");
        for (std::size_t x = 0; x < nx; ++x) {
            double s = 0.0;
            for (std::size_t y1 = 0; y1 < ny1; ++y1)
                for (std::size_t yr = 0; yr < nyr; ++yr) {
                    double v = p(x, y1, yr);
                    if (v < 0.0)
                        throw std::invalid_argument("PrimitiveChannel: negative entry");
                    s += v;
                }
            if (std::abs(s - 1.0) > kNormTol)
                throw std::invalid_argument(
                    "PrimitiveChannel: slice for x=" + std::to_string(x) +
                    " sums to " + std::to_string(s));
        }
    }

    std::size_t aux_cardinality() const { return nx * nyr + 1; }

    /// Marginal channel p(yr | x).
    double p_yr_given_x(std::size_t x, std::size_t yr) const {
        double s = 0.0;
        for (std::size_t y1 = 0; y1 < ny1; ++y1) s += p(x, y1, yr);
        return s;
    }

    /// Marginal channel p(y1 | x).
    double p_y1_given_x(std::size_t x, std::size_t y1) const {
        double s = 0.0;
        for (std::size_t yr = 0; yr < nyr; ++yr) s += p(x, y1, yr);
        return s;
    }
};

struct SearchConfig {
    int restarts = 64;
    int lp_parts = 20;  // quantization of the exact inner stage (1/step)
    std::uint64_t seed = 0;
    SimplexAscent::Options ascent;
    int threads = 0;  // 0 = hardware concurrency
};

/// Best-found certificate for the auxiliary-variable searches.
struct AuxSolution {
    std::vector<double> px;                         // input pmf
    std::vector<std::vector<double>> pv_given_xyr;  // nx*nyr rows over |V|
    double objective = kNegInf;
    bool feasible = true;  // search converged / constraints satisfied
};

struct BoundResult {
    double value = kNegInf;
    AuxSolution solution;
};

namespace detail {

// entropy of the marginal over the axes selected by mask (bit0 = X,
// bit1 = Y1, bit2 = Yr, bit3 = V) of a joint over (X, Y1, Yr, V)
class JointEval {
public:
    JointEval(const PrimitiveChannel& ch, std::size_t nv)
        : ch_(ch), nv_(nv), joint_(ch.nx * ch.ny1 * ch.nyr * nv) {}

    void rebuild(const std::vector<double>& px,
                 const std::vector<std::vector<double>>& pv_rows) {
        std::size_t i = 0;
        for (std::size_t x = 0; x < ch_.nx; ++x)
            for (std::size_t y1 = 0; y1 < ch_.ny1; ++y1)
                for (std::size_t yr = 0; yr < ch_.nyr; ++yr) {
                    double base = px[x] * ch_.p(x, y1, yr);
                    const auto& row = pv_rows[x * ch_.nyr + yr];
                    for (std::size_t v = 0; v < nv_; ++v) joint_[i++] = base * row[v];
                }
    }

    double h(unsigned mask) const {
        std::size_t n = 1;
        if (mask & 1u) n *= ch_.nx;
        if (mask & 2u) n *= ch_.ny1;
        if (mask & 4u) n *= ch_.nyr;
        if (mask & 8u) n *= nv_;
        scratch_.assign(n, 0.0);
        std::size_t i = 0;
        for (std::size_t x = 0; x < ch_.nx; ++x)
            for (std::size_t y1 = 0; y1 < ch_.ny1; ++y1)
                for (std::size_t yr = 0; yr < ch_.nyr; ++yr)
                    for (std::size_t v = 0; v < nv_; ++v) {
                        std::size_t key = 0;
                        if (mask & 1u) key = key * ch_.nx + x;
                        if (mask & 2u) key = key * ch_.ny1 + y1;
                        if (mask & 4u) key = key * ch_.nyr + yr;
                        if (mask & 8u) key = key * nv_ + v;
                        scratch_[key] += joint_[i++];
                    }
        double out = 0.0;
        for (double p : scratch_) out += xlog2x(p);
        return out;
    }

    // both terms of the unconstrained upper-bound objective
    std::pair<double, double> terms() const {
        double hx = h(0b0001), hy1 = h(0b0010), hyr = h(0b0100);
        double hxy1 = h(0b0011), hxyr = h(0b0101), hy1v = h(0b1010);
        double hxy1v = h(0b1011), hvyr = h(0b1100), hxyrv = h(0b1101);
        double hxy1yr = h(0b0111), hall = h(0b1111);
        double term1 = (hx + hy1v - hxy1v) - (hxyr + hvyr - hxyrv - hyr);
        double ixy1 = hx + hy1 - hxy1;
        double term2 = ixy1 + ch_.c0 - (hxy1v + hxy1yr - hall - hxy1);
        return {term1, term2};
    }

    double rate_term() const {  // I(X; Y1, V) - I(V; X | Yr)
        return terms().first;
    }

    double link_cost() const {  // I(V; Yr) - I(V; Y1)
        return h(0b0100) - h(0b1100) - h(0b0010) + h(0b1010);
    }

    double cf_rate() const {  // I(X; Y1, V)
        return h(0b0001) + h(0b1010) - h(0b1011);
    }

    double cf_cost() const {  // I(V; Yr | Y1)
        return h(0b1010) + h(0b0110) - h(0b1110) - h(0b0010);
    }

private:
    const PrimitiveChannel& ch_;
    std::size_t nv_;
    std::vector<double> joint_;
    mutable std::vector<double> scratch_;
};

inline SimplexAscent::Point make_point(std::vector<double> px,
                                       std::vector<std::vector<double>> rows) {
    SimplexAscent::Point pt;
    pt.reserve(rows.size() + 1);
    pt.push_back(std::move(px));
    for (auto& r : rows) pt.push_back(std::move(r));
    return pt;
}

inline std::vector<std::vector<double>> v_constant_rows(std::size_t nrows, std::size_t nv) {
    std::vector<std::vector<double>> rows(nrows, std::vector<double>(nv, 0.0));
    for (auto& r : rows) r[0] = 1.0;
    return rows;
}

inline std::vector<std::vector<double>> v_equals_yr_rows(const PrimitiveChannel& ch,
                                                         std::size_t nv) {
    std::vector<std::vector<double>> rows(ch.nx * ch.nyr, std::vector<double>(nv, 0.0));
    for (std::size_t x = 0; x < ch.nx; ++x)
        for (std::size_t yr = 0; yr < ch.nyr; ++yr)
            rows[x * ch.nyr + yr][yr % nv] = 1.0;
    return rows;
}

/// Runs each start through the engine concurrently and keeps the highest
/// value, ties going to the lowest start index.
template <typename MakeEngine>
inline std::pair<double, SimplexAscent::Point> run_starts(
    const std::vector<SimplexAscent::Point>& starts, MakeEngine&& make_engine,
    int threads) {
    std::vector<std::pair<double, SimplexAscent::Point>> results(starts.size());
    unsigned hw = threads > 0 ? unsigned(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    auto work = [&](std::size_t lo, std::size_t hi) {
        auto engine = make_engine();
        for (std::size_t i = lo; i < hi; ++i) results[i] = engine->ascend(starts[i]);
    };
    if (hw <= 1 || starts.size() < 2) {
        work(0, starts.size());
    } else {
        std::vector<std::future<void>> futs;
        std::size_t chunk = (starts.size() + hw - 1) / hw;
        for (std::size_t lo = 0; lo < starts.size(); lo += chunk)
            futs.push_back(std::async(std::launch::async, work, lo,
                                      std::min(lo + chunk, starts.size())));
        for (auto& f : futs) f.get();
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].first > results[best].first) best = i;
    return results[best];
}

}  // namespace detail

/// Compress-forward in its auxiliary-variable characterization:
/// max I(X; Y1, V) over p(x) p(v|yr) subject to I(V; Yr | Y1) <= C0.
/// Infeasible candidates are repaired by mixing the test channel toward a
/// constant (time-sharing toward a silent relay), which drives the cost
/// to zero continuously.
inline BoundResult compress_forward_bound(const PrimitiveChannel& ch,
                                          const SearchConfig& cfg = {}) {
    ch.validate();
    const std::size_t nv = ch.aux_cardinality();
    const double slack = 1e-11;

    // blocks: [px, p(v|yr) rows (nyr of them)]
    auto expand_rows = [nx = ch.nx, nyr = ch.nyr](const SimplexAscent::Point& pt) {
        std::vector<std::vector<double>> rows(nx * nyr);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t yr = 0; yr < nyr; ++yr) rows[x * nyr + yr] = pt[1 + yr];
        return rows;
    };

    std::vector<double> uniform(ch.nx, 1.0 / double(ch.nx));
    std::vector<SimplexAscent::Point> starts;
    {  // V constant
        std::vector<std::vector<double>> rows(ch.nyr, std::vector<double>(nv, 0.0));
        for (auto& r : rows) r[0] = 1.0;
        starts.push_back(detail::make_point(uniform, rows));
    }
    {  // V = Yr (repaired toward feasibility when C0 is small)
        std::vector<std::vector<double>> rows(ch.nyr, std::vector<double>(nv, 0.0));
        for (std::size_t yr = 0; yr < ch.nyr; ++yr) rows[yr][yr % nv] = 1.0;
        starts.push_back(detail::make_point(uniform, rows));
    }
    for (int r = int(starts.size()); r < cfg.restarts; ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0xc2b2ae35u * std::uint64_t(r) + 1);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < ch.nyr; ++i) rows.push_back(rng.simplex(nv));
        starts.push_back(detail::make_point(rng.simplex(ch.nx), std::move(rows)));
    }

    auto make_engine = [&]() {
        auto eval = std::make_shared<detail::JointEval>(ch, nv);
        auto cost = [eval, expand_rows](const SimplexAscent::Point& pt) {
            eval->rebuild(pt[0], expand_rows(pt));
            return eval->cf_cost();
        };
        auto obj = [eval, expand_rows](const SimplexAscent::Point& pt) {
            eval->rebuild(pt[0], expand_rows(pt));
            return eval->cf_rate();
        };
        auto repair = [cost, c0 = ch.c0, nyr = ch.nyr, slack](SimplexAscent::Point& pt) {
            if (cost(pt) <= c0 + slack) return true;
            double lo = 0.0, hi = 1.0;  // mix weight toward the constant channel
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                SimplexAscent::Point mixed = pt;
                for (std::size_t yr = 0; yr < nyr; ++yr) {
                    for (double& v : mixed[1 + yr]) v *= (1.0 - mid);
                    mixed[1 + yr][0] += mid;
                }
                if (cost(mixed) <= c0 + slack) hi = mid; else lo = mid;
            }
            for (std::size_t yr = 0; yr < nyr; ++yr) {
                for (double& v : pt[1 + yr]) v *= (1.0 - hi);
                pt[1 + yr][0] += hi;
            }
            return cost(pt) <= c0 + slack;
        };
        return std::make_unique<SimplexAscent>(obj, repair, cfg.ascent);
    };
    auto best = detail::run_starts(starts, make_engine, cfg.threads);

    BoundResult out;
    out.value = best.first;
    out.solution.px = best.second[0];
    out.solution.pv_given_xyr = expand_rows(best.second);
    out.solution.objective = best.first;
    out.solution.feasible = true;
    return out;
}

namespace detail {

/// Enumeration of step-quantized pmfs over n atoms (parts = 1/step).
inline std::vector<std::vector<double>> quantized_simplex(std::size_t n, int parts);

/// Exact inner maximization over p(v | x, yr) for inputs on a quantized
/// grid, via the mixture-weight linear program in the reverse
/// parameterization p(v), p(x, yr | v). Returns the best (value, px, rows)
/// found, with rows already converted back to the forward conditionals.
/// Only engaged at the smallest problem size (nx * nyr <= 4).
struct LpStage {
    double value = kNegInf;
    std::vector<double> px;
    std::vector<std::vector<double>> rows;  // nx*nyr rows over <= nv entries
    bool ran = false;
};

inline LpStage lp_inner_stage(const PrimitiveChannel& ch, std::size_t nv, int parts) {
    LpStage out;
    if (ch.nx * ch.nyr > 4) return out;
    const std::size_t na = ch.nx * ch.nyr;

    auto atoms = quantized_simplex(na, parts);
    auto pxs = quantized_simplex(ch.nx, parts);

    // f values per atom, via the generic table path
    std::vector<double> f1(atoms.size()), f2(atoms.size());
    std::vector<bool> usable(atoms.size(), true);
    for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
        const auto& q = atoms[ai];
        std::vector<double> j3(ch.nx * ch.ny1 * ch.nyr, 0.0);
        bool ok = true;
        for (std::size_t x = 0; x < ch.nx && ok; ++x)
            for (std::size_t yr = 0; yr < ch.nyr && ok; ++yr) {
                double m = q[x * ch.nyr + yr];
                if (m <= kZeroTol) continue;
                double myr = ch.p_yr_given_x(x, yr);
                if (myr <= kZeroTol) { ok = false; break; }
                for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                    j3[(x * ch.ny1 + y1) * ch.nyr + yr] = m * ch.p(x, y1, yr) / myr;
            }
        if (!ok) { usable[ai] = false; continue; }
        ProbTable t({ch.nx, ch.ny1, ch.nyr}, std::move(j3));
        double h_x_yr = entropy(t.marginal({0, 2})) - entropy(t.marginal({2}));
        double h_x_y1 = entropy(t.marginal({0, 1})) - entropy(t.marginal({1}));
        f1[ai] = h_x_yr - h_x_y1;
        f2[ai] = entropy(t) - entropy(t.marginal({0, 1}));
    }

    for (const auto& px : pxs) {
        std::vector<double> bary(na, 0.0);
        std::vector<double> j3(ch.nx * ch.ny1 * ch.nyr, 0.0);
        for (std::size_t x = 0; x < ch.nx; ++x)
            for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                    double v = px[x] * ch.p(x, y1, yr);
                    j3[(x * ch.ny1 + y1) * ch.nyr + yr] = v;
                    bary[x * ch.nyr + yr] += v;
                }
        ProbTable t({ch.nx, ch.ny1, ch.nyr}, j3);
        double h_x = entropy(t.marginal({0}));
        double ixy1 = h_x + entropy(t.marginal({1})) - entropy(t.marginal({0, 1}));
        double c1 = h_x - (entropy(t.marginal({0, 2})) - entropy(t.marginal({2})));
        double c2 = ixy1 + ch.c0 - (entropy(t) - entropy(t.marginal({0, 1})));

        std::vector<std::size_t> cols;
        for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
            if (!usable[ai]) continue;
            bool fits = true;
            for (std::size_t i = 0; i < na; ++i)
                if (atoms[ai][i] > kZeroTol && bary[i] <= kZeroTol) { fits = false; break; }
            if (fits) cols.push_back(ai);
        }
        if (cols.empty()) continue;
        const std::size_t nj = cols.size();
        std::vector<std::vector<double>> a(na + 2, std::vector<double>(nj + 4, 0.0));
        std::vector<double> b(na + 2, 0.0), c(nj + 4, 0.0);
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < nj; ++j) a[i][j] = atoms[cols[j]][i];
            b[i] = bary[i];
        }
        for (std::size_t j = 0; j < nj; ++j) {
            a[na][j] = f1[cols[j]];
            a[na + 1][j] = f2[cols[j]];
        }
        a[na][nj] = -1.0;
        a[na + 1][nj + 1] = -1.0;
        a[na][nj + 2] = a[na + 1][nj + 2] = -1.0;
        a[na][nj + 3] = a[na + 1][nj + 3] = 1.0;
        b[na] = -c1;
        b[na + 1] = -c2;
        c[nj + 2] = 1.0;
        c[nj + 3] = -1.0;
        auto sol = SimplexLp::maximize(a, b, c);
        if (!sol || sol->value <= out.value) continue;

        // convert the mixture back to nv forward conditional rows, dropping
        // the lightest atoms if a degenerate vertex carries more than nv
        std::vector<std::pair<double, std::size_t>> wts;
        for (std::size_t j = 0; j < nj; ++j)
            if (sol->x[j] > 1e-12) wts.push_back({sol->x[j], cols[j]});
        std::sort(wts.begin(), wts.end(), std::greater<>());
        if (wts.size() > nv) wts.resize(nv);
        double wsum = 0.0;
        for (auto& [w, ai] : wts) wsum += w;
        std::vector<std::vector<double>> rows(na, std::vector<double>(nv, 0.0));
        for (std::size_t i = 0; i < na; ++i) {
            double rsum = 0.0;
            for (std::size_t k = 0; k < wts.size(); ++k) {
                double m = (wts[k].first / wsum) * atoms[wts[k].second][i];
                rows[i][k] = m;
                rsum += m;
            }
            if (rsum > kZeroTol) {
                for (double& v : rows[i]) v /= rsum;
            } else {
                std::fill(rows[i].begin(), rows[i].end(), 0.0);
                rows[i][0] = 1.0;
            }
        }
        out.value = sol->value;
        out.px = px;
        out.rows = std::move(rows);
        out.ran = true;
    }
    return out;
}

}  // namespace detail

/// Main upper bound in its unconstrained form:
/// max over p(x), p(v|x, yr) of
///   min{ I(X;Y1,V) - I(V;X|Yr),  I(X;Y1) + C0 - I(V;Yr|X,Y1) }.
/// Warm starts include the compress-forward solution (whose value the
/// objective dominates pointwise), the V = Yr embedding, V constant, and,
/// at the smallest problem size, the argmax of an exact inner linear
/// program on a fine quantized grid, so the returned value never falls
/// below compress_forward_bound or the quantized-grid oracle.
inline BoundResult upper_bound(const PrimitiveChannel& ch, const SearchConfig& cfg = {}) {
    ch.validate();
    const std::size_t nv = ch.aux_cardinality();

    BoundResult cf = compress_forward_bound(ch, cfg);
    detail::LpStage lp = detail::lp_inner_stage(ch, nv, cfg.lp_parts);

    std::vector<double> uniform(ch.nx, 1.0 / double(ch.nx));
    std::vector<SimplexAscent::Point> starts;
    starts.push_back(detail::make_point(cf.solution.px, cf.solution.pv_given_xyr));
    starts.push_back(detail::make_point(uniform, detail::v_equals_yr_rows(ch, nv)));
    starts.push_back(detail::make_point(uniform, detail::v_constant_rows(ch.nx * ch.nyr, nv)));
    if (lp.ran) starts.push_back(detail::make_point(lp.px, lp.rows));
    for (int r = int(starts.size()); r < cfg.restarts; ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0x51ed2701u * std::uint64_t(r) + 1);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < ch.nx * ch.nyr; ++i) rows.push_back(rng.simplex(nv));
        starts.push_back(detail::make_point(rng.simplex(ch.nx), std::move(rows)));
    }

    auto make_engine = [&]() {
        auto eval = std::make_shared<detail::JointEval>(ch, nv);
        auto obj = [eval](const SimplexAscent::Point& pt) {
            eval->rebuild(pt[0], {pt.begin() + 1, pt.end()});
            auto [t1, t2] = eval->terms();
            return std::min(t1, t2);
        };
        return std::make_unique<SimplexAscent>(obj, nullptr, cfg.ascent);
    };
    auto best = detail::run_starts(starts, make_engine, cfg.threads);

    BoundResult out;
    out.value = std::max(best.first, cf.value);
    out.solution.px = best.second[0];
    out.solution.pv_given_xyr.assign(best.second.begin() + 1, best.second.end());
    out.solution.objective = best.first;
    out.solution.feasible = true;
    if (lp.ran) {
        // certify the linear-program point through the standard objective path
        detail::JointEval ev(ch, nv);
        ev.rebuild(lp.px, lp.rows);
        auto [t1, t2] = ev.terms();
        double lp_eval = std::min(t1, t2);
        if (lp_eval > out.value) {
            out.value = lp_eval;
            out.solution.px = lp.px;
            out.solution.pv_given_xyr = lp.rows;
            out.solution.objective = lp_eval;
        }
    }
    return out;
}

/// Constrained form of the same bound, exposed for diagnostics:
/// max I(X;Y1,V) - I(V;X|Yr) over p(x) p(v|x,yr) with I(V;Yr) - I(V;Y1) <= C0.
inline BoundResult upper_bound_constrained(const PrimitiveChannel& ch,
                                           const SearchConfig& cfg = {}) {
    ch.validate();
    const std::size_t nv = ch.aux_cardinality();
    const double slack = 1e-11;
    const std::size_t nrows = ch.nx * ch.nyr;

    std::vector<double> uniform(ch.nx, 1.0 / double(ch.nx));
    std::vector<SimplexAscent::Point> starts;
    starts.push_back(detail::make_point(uniform, detail::v_constant_rows(nrows, nv)));
    starts.push_back(detail::make_point(uniform, detail::v_equals_yr_rows(ch, nv)));
    for (int r = int(starts.size()); r < cfg.restarts; ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0x165667b1u * std::uint64_t(r) + 1);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < nrows; ++i) rows.push_back(rng.simplex(nv));
        starts.push_back(detail::make_point(rng.simplex(ch.nx), std::move(rows)));
    }

    auto make_engine = [&]() {
        auto eval = std::make_shared<detail::JointEval>(ch, nv);
        auto cost = [eval](const SimplexAscent::Point& pt) {
            eval->rebuild(pt[0], {pt.begin() + 1, pt.end()});
            return eval->link_cost();
        };
        auto obj = [eval](const SimplexAscent::Point& pt) {
            eval->rebuild(pt[0], {pt.begin() + 1, pt.end()});
            return eval->rate_term();
        };
        auto repair = [cost, c0 = ch.c0, nrows, slack](SimplexAscent::Point& pt) {
            if (cost(pt) <= c0 + slack) return true;
            double lo2 = 0.0, hi2 = 1.0;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo2 + hi2);
                SimplexAscent::Point mixed = pt;
                for (std::size_t r2 = 0; r2 < nrows; ++r2) {
                    for (double& v : mixed[1 + r2]) v *= (1.0 - mid);
                    mixed[1 + r2][0] += mid;
                }
                if (cost(mixed) <= c0 + slack) hi2 = mid; else lo2 = mid;
            }
            for (std::size_t r2 = 0; r2 < nrows; ++r2) {
                for (double& v : pt[1 + r2]) v *= (1.0 - hi2);
                pt[1 + r2][0] += hi2;
            }
            return cost(pt) <= c0 + slack;
        };
        return std::make_unique<SimplexAscent>(obj, repair, cfg.ascent);
    };
    auto best = detail::run_starts(starts, make_engine, cfg.threads);

    BoundResult out;
    out.value = best.first;
    out.solution.px = best.second[0];
    out.solution.pv_given_xyr.assign(best.second.begin() + 1, best.second.end());
    out.solution.objective = out.value;
    out.solution.feasible = true;
    return out;
}

/// Cutset bound max_p(x) min{ I(X;Y1) + C0, I(X;Y1,Yr) }.
inline double cutset_bound(const PrimitiveChannel& ch, const SearchConfig& cfg = {}) {
    ch.validate();
    auto value_at = [&](const std::vector<double>& px) {
        // entropies over (X, Y1, Yr)
        std::vector<double> pxy1(ch.nx * ch.ny1, 0.0), py1(ch.ny1, 0.0);
        std::vector<double> pall(ch.nx * ch.ny1 * ch.nyr, 0.0);
        std::vector<double> py1yr(ch.ny1 * ch.nyr, 0.0);
        for (std::size_t x = 0; x < ch.nx; ++x)
            for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                    double v = px[x] * ch.p(x, y1, yr);
                    pall[(x * ch.ny1 + y1) * ch.nyr + yr] += v;
                    pxy1[x * ch.ny1 + y1] += v;
                    py1[y1] += v;
                    py1yr[y1 * ch.nyr + yr] += v;
                }
        auto hvec = [](const std::vector<double>& p) {
            double h = 0.0;
            for (double q : p) h += xlog2x(q);
            return h;
        };
        double hx = 0.0;
        for (double q : px) hx += xlog2x(q);
        double ixy1 = hx + hvec(py1) - hvec(pxy1);
        double ixy1yr = hx + hvec(py1yr) - hvec(pall);
        return std::min(ixy1 + ch.c0, ixy1yr);
    };
    auto obj = [&](const SimplexAscent::Point& pt) { return value_at(pt[0]); };
    SimplexAscent engine(obj, nullptr, cfg.ascent);
    double best = kNegInf;
    std::vector<SimplexAscent::Point> starts;
    starts.push_back({std::vector<double>(ch.nx, 1.0 / double(ch.nx))});
    for (int r = 1; r < std::max(8, cfg.restarts / 4); ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0x27d4eb2fu * std::uint64_t(r) + 1);
        starts.push_back({rng.simplex(ch.nx)});
    }
    for (auto& s : starts) best = std::max(best, engine.ascend(s).first);
    return best;
}

struct GenericityResult {
    bool generic = false;
    double min_singular_value = 0.0;
};

/// Full-row-rank test of the marginal channel matrix p(y1|x): generic iff
/// the nx-th singular value exceeds 1e-10.
inline GenericityResult is_generic(const PrimitiveChannel& ch) {
    ch.validate();
    const std::size_t n = ch.nx, m = ch.ny1;
    // gram = A A^T, A = p(y1|x)
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                s += ch.p_y1_given_x(i, k) * ch.p_y1_given_x(j, k);
            gram[i * n + j] = s;
        }
    // Jacobi eigenvalue iteration on the symmetric gram matrix
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::abs(gram[p * n + q]);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = gram[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double app = gram[p * n + p], aqq = gram[q * n + q];
                double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
                double c = std::cos(phi), s = std::sin(phi);
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = gram[k * n + p], akq = gram[k * n + q];
                    gram[k * n + p] = c * akp - s * akq;
                    gram[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = gram[p * n + k], aqk = gram[q * n + k];
                    gram[p * n + k] = c * apk - s * aqk;
                    gram[q * n + k] = s * apk + c * aqk;
                }
            }
    }
    double min_eig = gram[0];
    for (std::size_t i = 1; i < n; ++i) min_eig = std::min(min_eig, gram[i * n + i]);
    GenericityResult res;
    res.min_singular_value = std::sqrt(std::max(min_eig, 0.0));
    res.generic = res.min_singular_value > 1e-10;
    return res;
}

namespace detail {

inline std::vector<std::vector<double>> quantized_simplex(std::size_t n, int parts) {
    std::vector<std::vector<double>> out;
    std::vector<int> counts(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == n) {
            counts[i] = left;
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = double(counts[j]) / double(parts);
            out.push_back(std::move(p));
            return;
        }
        for (int k = 0; k <= left; ++k) {
            counts[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, parts);
    return out;
}

/// All pmfs over `n` atoms with entries that are multiples of 1/parts.
inline void enumerate_simplex(std::size_t n, int parts,
                              const std::function<void(const std::vector<double>&)>& emit) {
    std::vector<int> counts(n, 0);
    std::vector<double> point(n);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == n) {
            counts[i] = left;
            for (std::size_t j = 0; j < n; ++j)
                point[j] = double(counts[j]) / double(parts);
            emit(point);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            counts[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, parts);
}

}  // namespace detail

/// Exhaustive quantized oracle for the unconstrained upper bound. The input
/// pmf ranges over the step-quantized simplex; for each of them the search
/// over p(v|x, yr) is solved exactly on the step-quantized set of reverse
/// conditionals p(x, yr | v) with a small linear program (max-min of the two
/// affine terms over mixture weights with the correct barycenter). Every
/// candidate corresponds to a valid auxiliary channel, so the oracle never
/// exceeds the continuous supremum. Deterministic.
inline double brute_force_oracle(const PrimitiveChannel& ch, double step,
                                 std::size_t eval_cap = 200000000) {
    ch.validate();
    if (ch.nx * ch.nyr > 4)
        throw std::invalid_argument("brute_force_oracle: nx * nyr must be <= 4");
    if (!(step > 0.0) || step > 0.25)
        throw std::invalid_argument("brute_force_oracle: step must lie in (0, 0.25]");
    int parts = int(std::lround(1.0 / step));
    if (std::abs(parts * step - 1.0) > 1e-9)
        throw std::invalid_argument("brute_force_oracle: 1/step must be an integer");

    const std::size_t na = ch.nx * ch.nyr;  // atom dimension
    std::vector<std::vector<double>> atoms;
    detail::enumerate_simplex(na, parts, [&](const std::vector<double>& p) {
        atoms.push_back(p);
    });
    std::vector<std::vector<double>> pxs;
    detail::enumerate_simplex(ch.nx, parts, [&](const std::vector<double>& p) {
        pxs.push_back(p);
    });
    if (atoms.size() * pxs.size() > eval_cap)
        throw std::runtime_error("brute_force_oracle: quantized space exceeds the evaluation cap");

    // channel conditionals p(y1 | x, yr); rows with zero mass are flagged
    std::vector<double> y1_given_xyr(ch.nx * ch.nyr * ch.ny1, 0.0);
    std::vector<bool> row_defined(ch.nx * ch.nyr, false);
    for (std::size_t x = 0; x < ch.nx; ++x)
        for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
            double m = ch.p_yr_given_x(x, yr);
            if (m > kZeroTol) {
                row_defined[x * ch.nyr + yr] = true;
                for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                    y1_given_xyr[(x * ch.nyr + yr) * ch.ny1 + y1] = ch.p(x, y1, yr) / m;
            }
        }

    // f1(q) = H_q(X | Yr) - H_q(X | Y1);  f2(q) = H_q(Yr | X, Y1)
    // (q is a pmf on (x, yr); y1 is generated through the channel)
    std::vector<double> f1(atoms.size()), f2(atoms.size());
    std::vector<bool> usable(atoms.size(), true);
    {
        std::vector<double> jxy1(ch.nx * ch.ny1), pyr(ch.nyr), py1(ch.ny1);
        for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
            const auto& q = atoms[ai];
            bool ok = true;
            for (std::size_t i = 0; i < na; ++i)
                if (q[i] > kZeroTol && !row_defined[i]) ok = false;
            if (!ok) { usable[ai] = false; continue; }
            double h_xyr = 0.0, h_full = 0.0;
            std::fill(jxy1.begin(), jxy1.end(), 0.0);
            std::fill(pyr.begin(), pyr.end(), 0.0);
            std::fill(py1.begin(), py1.end(), 0.0);
            double h_xy1yr = 0.0;
            for (std::size_t x = 0; x < ch.nx; ++x)
                for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                    double m = q[x * ch.nyr + yr];
                    if (m <= kZeroTol) continue;
                    h_xyr += xlog2x(m);
                    pyr[yr] += m;
                    for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
                        double w = m * y1_given_xyr[(x * ch.nyr + yr) * ch.ny1 + y1];
                        jxy1[x * ch.ny1 + y1] += w;
                        py1[y1] += w;
                        h_xy1yr += xlog2x(w);
                    }
                }
            (void)h_full;
            double h_yr = 0.0, h_y1 = 0.0, h_xy1 = 0.0;
            for (double v : pyr) h_yr += xlog2x(v);
            for (double v : py1) h_y1 += xlog2x(v);
            for (double v : jxy1) h_xy1 += xlog2x(v);
            // H(X|Yr) = H(X,Yr) - H(Yr); H(X|Y1) = H(X,Y1) - H(Y1)
            f1[ai] = (h_xyr - h_yr) - (h_xy1 - h_y1);
            // H(Yr | X, Y1) = H(X,Y1,Yr) - H(X,Y1)
            f2[ai] = h_xy1yr - h_xy1;
        }
    }

    double best = kNegInf;
    for (const auto& px : pxs) {
        // constants and barycenter under this input pmf
        std::vector<double> bary(na, 0.0), py1(ch.ny1, 0.0), jxy1(ch.nx * ch.ny1, 0.0);
        double h_x = 0.0;
        for (std::size_t x = 0; x < ch.nx; ++x) {
            h_x += xlog2x(px[x]);
            for (std::size_t yr = 0; yr < ch.nyr; ++yr)
                bary[x * ch.nyr + yr] = px[x] * ch.p_yr_given_x(x, yr);
            for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
                double w = px[x] * ch.p_y1_given_x(x, y1);
                jxy1[x * ch.ny1 + y1] = w;
                py1[y1] += w;
            }
        }
        double h_y1 = 0.0, h_xy1 = 0.0, h_yr = 0.0, h_xyr = 0.0, h_xy1yr = 0.0;
        for (double v : py1) h_y1 += xlog2x(v);
        for (double v : jxy1) h_xy1 += xlog2x(v);
        std::vector<double> pyr(ch.nyr, 0.0);
        for (std::size_t x = 0; x < ch.nx; ++x)
            for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                pyr[yr] += bary[x * ch.nyr + yr];
                h_xyr += xlog2x(bary[x * ch.nyr + yr]);
                for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                    h_xy1yr += xlog2x(px[x] * ch.p(x, y1, yr));
            }
        for (double v : pyr) h_yr += xlog2x(v);
        double ixy1 = h_x + h_y1 - h_xy1;
        double c1 = h_x - (h_xyr - h_yr);               // H(X) - H(X|Yr)
        double c2 = ixy1 + ch.c0 - (h_xy1yr - h_xy1);   // I(X;Y1) + C0 - H(Yr|X,Y1)

        // columns: usable atoms whose support fits the barycenter support
        std::vector<std::size_t> cols;
        for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
            if (!usable[ai]) continue;
            bool fits = true;
            for (std::size_t i = 0; i < na; ++i)
                if (atoms[ai][i] > kZeroTol && bary[i] <= kZeroTol) { fits = false; break; }
            if (fits) cols.push_back(ai);
        }
        if (cols.empty()) continue;

        // LP variables: weights mu_j, slack s1, s2, t = tp - tm
        // rows: barycenter (na rows; the total-mass row is implied) and the
        // two epigraph rows
        const std::size_t nj = cols.size();
        std::vector<std::vector<double>> a(na + 2, std::vector<double>(nj + 4, 0.0));
        std::vector<double> b(na + 2, 0.0), c(nj + 4, 0.0);
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < nj; ++j) a[i][j] = atoms[cols[j]][i];
            b[i] = bary[i];
        }
        for (std::size_t j = 0; j < nj; ++j) {
            a[na][j] = f1[cols[j]];
            a[na + 1][j] = f2[cols[j]];
        }
        a[na][nj] = -1.0;      // -s1
        a[na + 1][nj + 1] = -1.0;  // -s2
        a[na][nj + 2] = -1.0;  // -tp
        a[na][nj + 3] = 1.0;   // +tm
        a[na + 1][nj + 2] = -1.0;
        a[na + 1][nj + 3] = 1.0;
        b[na] = -c1;
        b[na + 1] = -c2;
        c[nj + 2] = 1.0;
        c[nj + 3] = -1.0;
        auto sol = SimplexLp::maximize(a, b, c);
        if (sol) best = std::max(best, sol->value);
    }
    if (best == kNegInf)
        throw std::runtime_error("brute_force_oracle: no feasible quantized point");
    return best;
}

/// Conditional graph entropy of the characteristic graph of a deterministic
/// primitive relay channel (X = f(Y1, Yr) almost surely under uniform X).
/// f is indexed f[y1 * nyr + yr]. Minimizes I(W; Yr | Y1) over p(w | yr)
/// with W ranging over independent sets containing yr; the objective is
/// convex in p(w | yr), so the multi-start ascent converges globally.
inline double conditional_graph_entropy(const PrimitiveChannel& ch,
                                        const std::vector<int>& f,
                                        const SearchConfig& cfg = {}) {
    ch.validate();
    if (ch.ny1 > 4 || ch.nyr > 4)
        throw std::invalid_argument("conditional_graph_entropy: alphabets must be <= 4");
    if (f.size() != ch.ny1 * ch.nyr)
        throw std::invalid_argument("conditional_graph_entropy: f must map (y1, yr) pairs");

    // joint p(y1, yr) under uniform input, and determinism check
    std::vector<double> joint(ch.ny1 * ch.nyr, 0.0);
    for (std::size_t x = 0; x < ch.nx; ++x)
        for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
            for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                double v = ch.p(x, y1, yr) / double(ch.nx);
                if (v > kZeroTol && std::size_t(f[y1 * ch.nyr + yr]) != x)
                    throw std::invalid_argument(
                        "conditional_graph_entropy: f is inconsistent with the channel support");
                joint[y1 * ch.nyr + yr] += v;
            }

    // characteristic graph on yr
    std::vector<bool> edge(ch.nyr * ch.nyr, false);
    for (std::size_t u = 0; u < ch.nyr; ++u)
        for (std::size_t w = u + 1; w < ch.nyr; ++w)
            for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                if (joint[y1 * ch.nyr + u] > kZeroTol && joint[y1 * ch.nyr + w] > kZeroTol &&
                    f[y1 * ch.nyr + u] != f[y1 * ch.nyr + w]) {
                    edge[u * ch.nyr + w] = edge[w * ch.nyr + u] = true;
                    break;
                }

    // independent sets (nonempty subsets with no internal edge)
    std::vector<unsigned> ind_sets;
    for (unsigned s = 1; s < (1u << ch.nyr); ++s) {
        bool ok = true;
        for (std::size_t u = 0; u < ch.nyr && ok; ++u)
            for (std::size_t w = u + 1; w < ch.nyr && ok; ++w)
                if ((s >> u & 1u) && (s >> w & 1u) && edge[u * ch.nyr + w]) ok = false;
        if (ok) ind_sets.push_back(s);
    }
    const std::size_t nw = ind_sets.size();

    // admissible sets per yr (those containing it)
    std::vector<std::vector<std::size_t>> admissible(ch.nyr);
    for (std::size_t yr = 0; yr < ch.nyr; ++yr)
        for (std::size_t wi = 0; wi < nw; ++wi)
            if (ind_sets[wi] >> yr & 1u) admissible[yr].push_back(wi);

    // I(W; Yr | Y1) for blocks p(w | yr) restricted to admissible sets
    auto objective_cost = [&](const SimplexAscent::Point& rows) {
        double h_wy1 = 0.0, h_wy1yr = 0.0, h_y1 = 0.0, h_y1yr = 0.0;
        std::vector<double> pw_y1(nw);
        for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
            std::fill(pw_y1.begin(), pw_y1.end(), 0.0);
            double py1 = 0.0;
            for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                double m = joint[y1 * ch.nyr + yr];
                py1 += m;
                h_y1yr += xlog2x(m);
                if (m <= kZeroTol) continue;
                const auto& adm = admissible[yr];
                for (std::size_t k = 0; k < adm.size(); ++k) {
                    double w = m * rows[yr][k];
                    pw_y1[adm[k]] += w;
                    h_wy1yr += xlog2x(w);
                }
            }
            h_y1 += xlog2x(py1);
            for (double v : pw_y1) h_wy1 += xlog2x(v);
        }
        // I(W;Yr|Y1) = H(W|Y1) + H(Yr|Y1) - H(W,Yr|Y1)
        return (h_wy1 - h_y1) + (h_y1yr - h_y1) - (h_wy1yr - h_y1);
    };
    auto obj = [&](const SimplexAscent::Point& rows) { return -objective_cost(rows); };

    std::vector<SimplexAscent::Point> starts;
    {
        SimplexAscent::Point p0(ch.nyr), p1(ch.nyr);
        for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
            p0[yr].assign(admissible[yr].size(), 0.0);
            p1[yr].assign(admissible[yr].size(), 0.0);
            // largest admissible set / singleton set
            std::size_t best_k = 0, single_k = 0;
            int best_sz = -1;
            for (std::size_t k = 0; k < admissible[yr].size(); ++k) {
                int sz = __builtin_popcount(ind_sets[admissible[yr][k]]);
                if (sz > best_sz) { best_sz = sz; best_k = k; }
                if (ind_sets[admissible[yr][k]] == (1u << yr)) single_k = k;
            }
            p0[yr][best_k] = 1.0;
            p1[yr][single_k] = 1.0;
        }
        starts.push_back(std::move(p0));
        starts.push_back(std::move(p1));
    }
    for (int r = int(starts.size()); r < std::max(8, cfg.restarts / 8); ++r) {
        Rng rng(cfg.seed * 0x9e3779b9u + 0x85ebca77u * std::uint64_t(r) + 1);
        SimplexAscent::Point p(ch.nyr);
        for (std::size_t yr = 0; yr < ch.nyr; ++yr) p[yr] = rng.simplex(admissible[yr].size());
        starts.push_back(std::move(p));
    }
    SimplexAscent engine(obj, nullptr, cfg.ascent);
    double best = kNegInf;
    for (auto& s : starts) best = std::max(best, engine.ascend(s).first);
    return -best;
}

}  // namespace relay::discrete
