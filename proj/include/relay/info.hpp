#pragma once

// Finite-alphabet information measures in bits (log base 2), plus the
// AWGN capacity function C(x) = (1/2) log2(1 + x).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace relay {

inline constexpr double kNormTol = 1e-12;   // pmf normalization tolerance
inline constexpr double kZeroTol = 1e-15;   // entries below this are exact zeros

/// -x*log2(x) with 0 log 0 = 0.
inline double xlog2x(double x) {
    if (x < kZeroTol) return 0.0;
    return -x * std::log2(x);
}

/// Binary entropy H2(x) in bits, defined on [0,1].
inline double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    return xlog2x(x) + xlog2x(1.0 - x);
}

/// Gaussian capacity C(x) = (1/2) log2(1+x), x >= 0.
inline double gaussian_capacity(double x) {
    if (x < 0.0)
        throw std::domain_error("gaussian_capacity: negative SNR");
    return 0.5 * std::log2(1.0 + x);
}

/// A joint probability mass function over a product of small finite alphabets.
/// values are stored row-major in axis order; construction validates
/// nonnegativity and renormalizes when the mass deviates from 1 by at most
/// kNormTol, rejecting larger deviations.
class ProbTable {
public:
    ProbTable(std::vector<std::size_t> dims, std::vector<double> values)
        : dims_(std::move(dims)), values_(std::move(values)) {
        if (dims_.empty()) throw std::invalid_argument("ProbTable: no axes");
        std::size_t n = 1;
        for (std::size_t d : dims_) {
            if (d < 1) throw std::invalid_argument("ProbTable: axis size < 1");
            n *= d;
        }
        if (values_.size() != n)
            throw std::invalid_argument("ProbTable: value count does not match dims");
        double sum = 0.0;
        for (double v : values_) {
            if (v < 0.0) {
                if (v < -kZeroTol)
                    throw std::invalid_argument("ProbTable: negative entry");
                v = 0.0;
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kNormTol)
            throw std::invalid_argument("ProbTable: entries sum to " +
                                        std::to_string(sum) + ", not 1");
        for (double& v : values_) v = std::max(v, 0.0) / sum;
    }

    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t axes() const { return dims_.size(); }

    /// Marginal over the given (sorted or unsorted) axis subset.
    ProbTable marginal(const std::vector<std::size_t>& keep) const {
        check_axes(keep, "marginal");
        std::vector<std::size_t> kd;
        kd.reserve(keep.size());
        std::size_t kn = 1;
        for (std::size_t a : keep) { kd.push_back(dims_[a]); kn *= dims_[a]; }
        std::vector<double> out(kn, 0.0);
        std::vector<std::size_t> idx(dims_.size(), 0);
        for (std::size_t flat = 0; flat < values_.size(); ++flat) {
            std::size_t off = 0;
            for (std::size_t k = 0; k < keep.size(); ++k)
                off = off * dims_[keep[k]] + idx[keep[k]];
            out[off] += values_[flat];
            for (std::size_t a = dims_.size(); a-- > 0;) {
                if (++idx[a] < dims_[a]) break;
                idx[a] = 0;
            }
        }
        return ProbTable(std::move(kd), std::move(out));
    }

private:
    void check_axes(const std::vector<std::size_t>& axes, const char* who) const {
        for (std::size_t a : axes)
            if (a >= dims_.size())
                throw std::invalid_argument(std::string(who) + ": axis out of range");
    }

    std::vector<std::size_t> dims_;
    std::vector<double> values_;
};

/// Shannon entropy of a table, in bits.
inline double entropy(const ProbTable& p) {
    double h = 0.0;
    for (double v : p.values()) h += xlog2x(v);
    return h;
}

namespace detail {
inline std::vector<std::size_t> join_axes(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
    std::vector<std::size_t> u = a;
    u.insert(u.end(), b.begin(), b.end());
    std::sort(u.begin(), u.end());
    if (std::adjacent_find(u.begin(), u.end()) != u.end())
        throw std::invalid_argument("mutual_information: overlapping axis groups");
    return u;
}
}  // namespace detail

/// I(A;B) over a joint table; groupA/groupB are disjoint axis subsets.
inline double mutual_information(const ProbTable& joint,
                                 const std::vector<std::size_t>& group_a,
                                 const std::vector<std::size_t>& group_b) {
    auto ab = detail::join_axes(group_a, group_b);
    return entropy(joint.marginal(group_a)) + entropy(joint.marginal(group_b)) -
           entropy(joint.marginal(ab));
}

/// I(A;B|C): groups must be pairwise disjoint.
inline double mutual_information_given(const ProbTable& joint,
                                       const std::vector<std::size_t>& group_a,
                                       const std::vector<std::size_t>& group_b,
                                       const std::vector<std::size_t>& group_c) {
    auto ac = detail::join_axes(group_a, group_c);
    auto bc = detail::join_axes(group_b, group_c);
    auto abc = detail::join_axes(detail::join_axes(group_a, group_b), group_c);
    return entropy(joint.marginal(ac)) + entropy(joint.marginal(bc)) -
           entropy(joint.marginal(abc)) -
           (group_c.empty() ? 0.0 : entropy(joint.marginal(group_c)));
}

}  // namespace relay
