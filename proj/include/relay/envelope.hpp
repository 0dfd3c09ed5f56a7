#pragma once

// 1-D upper concave envelopes as piecewise-linear functions.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace relay {

/// Piecewise-linear concave function on [breakpoints.front(), breakpoints.back()].
/// Breakpoints are strictly increasing and slopes are nonincreasing.
/// Evaluation at a breakpoint returns its ordinate exactly.
class PiecewiseLinearFn {
public:
    PiecewiseLinearFn(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        if (xs_.size() != ys_.size() || xs_.size() < 2)
            throw std::invalid_argument("PiecewiseLinearFn: need >= 2 matched points");
        for (std::size_t i = 1; i < xs_.size(); ++i)
            if (!(xs_[i] > xs_[i - 1]))
                throw std::invalid_argument("PiecewiseLinearFn: abscissae not increasing");
    }

    double operator()(double x) const {
        if (x < xs_.front() || x > xs_.back())
            throw std::domain_error("PiecewiseLinearFn: evaluation outside domain");
        // lower_bound by hand; exact hit returns the stored ordinate.
        std::size_t lo = 0, hi = xs_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (xs_[mid] <= x) lo = mid; else hi = mid;
        }
        if (x == xs_[lo]) return ys_[lo];
        if (x == xs_[hi]) return ys_[hi];
        double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
        return ys_[lo] + t * (ys_[hi] - ys_[lo]);
    }

    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& ordinates() const { return ys_; }

private:
    std::vector<double> xs_, ys_;
};

/// Upper concave envelope of the sample set {(xs[i], ys[i])}: the upper
/// boundary of the convex hull, built with a monotone chain. The envelope
/// dominates every sample; its accuracy as an envelope of an underlying
/// function is limited by the sample spacing.
inline PiecewiseLinearFn upper_concave_envelope(const std::vector<double>& xs,
                                                const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("upper_concave_envelope: need >= 2 matched samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("upper_concave_envelope: abscissae not strictly increasing");

    std::vector<std::size_t> hull;  // indices of upper-hull vertices
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2) {
            std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // drop b if it lies on or below segment a--i
            double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) -
                           (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross >= 0.0) hull.pop_back(); else break;
        }
        hull.push_back(i);
    }
    std::vector<double> hx, hy;
    hx.reserve(hull.size());
    hy.reserve(hull.size());
    for (std::size_t i : hull) { hx.push_back(xs[i]); hy.push_back(ys[i]); }
    return PiecewiseLinearFn(std::move(hx), std::move(hy));
}

}  // namespace relay
