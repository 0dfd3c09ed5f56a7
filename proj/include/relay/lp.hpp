#pragma once

// Dense two-phase primal simplex for the small linear programs used by the
// quantized search oracles (a handful of rows, up to a few thousand columns).
// Bland's rule, so it cannot cycle.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace relay {

/// maximize c.x subject to A x = b, x >= 0 (b is made nonnegative internally).
/// Returns the optimal value and solution, or nullopt when infeasible.
/// Throws on an unbounded program.
class SimplexLp {
public:
    struct Solution {
        double value;
        std::vector<double> x;
    };

    static std::optional<Solution> maximize(const std::vector<std::vector<double>>& a,
                                            std::vector<double> b,
                                            const std::vector<double>& c,
                                            double eps = 1e-9) {
        const std::size_t m = a.size();
        const std::size_t n = m ? a[0].size() : 0;
        if (b.size() != m || c.size() != n)
            throw std::invalid_argument("SimplexLp: inconsistent dimensions");

        // tableau with artificial variables appended: columns [0,n) original,
        // [n, n+m) artificial, last column = rhs
        std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            double sgn = b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n; ++j) t[i][j] = sgn * a[i][j];
            t[i][n + i] = 1.0;
            t[i][n + m] = sgn * b[i];
        }
        std::vector<std::size_t> basis(m);
        for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

        // phase 1: minimize sum of artificials
        for (std::size_t j = 0; j <= n + m; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += t[i][j];
            t[m][j] = -s;  // objective row of (-sum of artificial rows)
        }
        for (std::size_t j = n; j < n + m; ++j) t[m][j] = 0.0;
        run(t, basis, n + m, eps);
        if (t[m][n + m] < -1e-7) return std::nullopt;  // infeasible

        // drive any artificial out of the basis / drop its column
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) continue;
            std::size_t enter = n + m;
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(t[i][j]) > eps) { enter = j; break; }
            if (enter < n) pivot(t, basis, i, enter);
            // else the row is redundant; leave the artificial at value 0
        }

        // phase 2 objective
        for (std::size_t j = 0; j <= n + m; ++j) t[m][j] = 0.0;
        for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] >= n) continue;
            double coef = t[m][basis[i]];
            if (coef == 0.0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) t[m][j] -= coef * t[i][j];
        }
        // forbid re-entering artificial columns
        for (std::size_t j = n; j < n + m; ++j) t[m][j] = std::numeric_limits<double>::infinity();
        run(t, basis, n, eps);

        Solution sol;
        sol.x.assign(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n) sol.x[basis[i]] = t[i][n + m];
        sol.value = 0.0;
        for (std::size_t j = 0; j < n; ++j) sol.value += c[j] * sol.x[j];
        return sol;
    }

private:
    static void pivot(std::vector<std::vector<double>>& t,
                      std::vector<std::size_t>& basis, std::size_t row, std::size_t col) {
        const std::size_t cols = t[0].size();
        double piv = t[row][col];
        for (std::size_t j = 0; j < cols; ++j) t[row][j] /= piv;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == row) continue;
            double factor = t[i][col];
            if (factor == 0.0 || !std::isfinite(factor)) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= factor * t[row][j];
        }
        basis[row] = col;
    }

    static void run(std::vector<std::vector<double>>& t,
                    std::vector<std::size_t>& basis, std::size_t ncols, double eps) {
        const std::size_t m = t.size() - 1;
        const std::size_t rhs = t[0].size() - 1;
        for (int iter = 0; iter < 100000; ++iter) {
            // Bland: smallest-index column with negative reduced cost
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j)
                if (std::isfinite(t[m][j]) && t[m][j] < -eps) { enter = j; break; }
            if (enter == ncols) return;  // optimal
            std::size_t leave = m;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] > eps) {
                    double ratio = t[i][rhs] / t[i][enter];
                    if (leave == m || ratio < best_ratio - 1e-15 ||
                        (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave == m)
                throw std::runtime_error("SimplexLp: unbounded program");
            pivot(t, basis, leave, enter);
        }
        throw std::runtime_error("SimplexLp: iteration limit");
    }
};

}  // namespace relay
