#pragma once

// Bounds for the Gaussian product-form primitive relay channel: the
// closed-form upper bound and its optimizing conditional covariance, the
// equivalent Wu-style trigonometric bound, and the decode-forward /
// compress-forward lower bounds. Power is normalized to P = 1; the noise
// parameterization (P, N1, Nr) is kept because the covariance optimizers
// are naturally stated in it.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relay/info.hpp"

namespace relay::primitive {

struct PrimitiveGaussianParams {
    double s12 = 0.0;  // P / Nr
    double s13 = 0.0;  // P / N1
    double c0 = 0.0;   // relay link capacity, bits

    static PrimitiveGaussianParams from_snr(double s12, double s13, double c0) {
        if (!(s12 >= 0.0) || !(s13 >= 0.0) || !(c0 >= 0.0))
            throw std::domain_error("PrimitiveGaussianParams: nonnegative S12, S13, C0 required");
        return {s12, s13, c0};
    }

    static PrimitiveGaussianParams from_s23(double s12, double s13, double s23) {
        if (!(s23 >= 0.0))
            throw std::domain_error("PrimitiveGaussianParams: nonnegative S23 required");
        return from_snr(s12, s13, 0.5 * std::log2(1.0 + s23));
    }

    double s23() const { return std::exp2(2.0 * c0) - 1.0; }
    double p() const { return 1.0; }
    double n1() const { return 1.0 / s13; }
    double nr() const { return 1.0 / s12; }
    /// Regime split shared by the upper bound, decode-forward, and the
    /// trigonometric bound: relay observation at least as good as what the
    /// receiver plus relay link can use.
    bool relay_saturated() const { return s12 >= s13 + s23() + s13 * s23(); }
};

/// Closed-form upper bound (two branches keyed on the regime split).
inline double upper_bound(const PrimitiveGaussianParams& pg) {
    double s23 = pg.s23();
    if (pg.relay_saturated())
        return 0.5 * std::log2((1.0 + pg.s13) * (1.0 + s23));
    double denom = (pg.s13 + 1.0) * (s23 + 1.0) - 1.0;
    if (denom <= 0.0) return gaussian_capacity(pg.s13);  // S13 = S23 = 0
    return gaussian_capacity(pg.s13 + pg.s12 * (pg.s13 + 1.0) * s23 / denom);
}

/// Decode-forward lower bound.
inline double decode_forward(const PrimitiveGaussianParams& pg) {
    if (pg.relay_saturated())
        return 0.5 * std::log2((1.0 + pg.s13) * (1.0 + pg.s23()));
    return gaussian_capacity(pg.s12);
}

/// Compress-forward lower bound.
inline double compress_forward(const PrimitiveGaussianParams& pg) {
    double s23 = pg.s23();
    double denom = pg.s12 + (pg.s13 + 1.0) * (s23 + 1.0);
    return gaussian_capacity(pg.s13 + pg.s12 * (pg.s13 + 1.0) * s23 / denom);
}

/// Cutset bound for the primitive relay: min{C(S13) + C0, C(S13 + S12)}.
inline double cutset_bound(const PrimitiveGaussianParams& pg) {
    return std::min(gaussian_capacity(pg.s13) + pg.c0,
                    gaussian_capacity(pg.s13 + pg.s12));
}

/// Conditional covariance of (X, Yr) given the auxiliary variable, in the
/// (P, N1, Nr) parameterization: diag entries K1, K2 and correlation rho.
struct CovPoint {
    double k1 = 0.0;
    double k2 = 0.0;
    double rho = 0.0;
};

/// Value of the covariance-parameterized upper bound at a point:
/// (1/2) log((P+Nr)/Nr) + (1/2) log((K1+N1)/N1) + (1/2) log(1-rho^2).
inline double covariance_objective(const PrimitiveGaussianParams& pg, const CovPoint& c) {
    double p = pg.p(), n1 = pg.n1(), nr = pg.nr();
    return 0.5 * std::log2((p + nr) / nr) + 0.5 * std::log2((c.k1 + n1) / n1) +
           0.5 * std::log2(1.0 - c.rho * c.rho);
}

/// Relay-link cost of a covariance point, bits; the upper bound constrains
/// this by C0 and the maximizer meets it with equality.
inline double covariance_link_cost(const PrimitiveGaussianParams& pg, const CovPoint& c) {
    double p = pg.p(), n1 = pg.n1(), nr = pg.nr();
    return 0.5 * std::log2(p + nr) - 0.5 * std::log2(c.k2) -
           0.5 * std::log2(p + n1) + 0.5 * std::log2(c.k1 + n1);
}

/// The unique maximizing covariance point. Requires S12, S13 > 0. The two
/// closed-form K1 roots correspond to the two regimes; exactly one lies in
/// [0, P] and is selected by membership rather than by the regime label.
/// C0 = 0 degenerates (the link constraint forces K2 = P + Nr) and is
/// handled analytically.
inline CovPoint optimal_covariance(const PrimitiveGaussianParams& pg) {
    if (!(pg.s12 > 0.0) || !(pg.s13 > 0.0))
        throw std::domain_error("optimal_covariance: positive S12, S13 required");
    double p = pg.p(), n1 = pg.n1(), nr = pg.nr();
    if (pg.c0 <= 0.0) {
        CovPoint c;
        c.k1 = p;
        c.k2 = p + nr;
        c.rho = p / std::sqrt(c.k1 * c.k2);
        return c;
    }
    double e = std::exp2(2.0 * pg.c0);   // 2^{2 C0} = 1 + S23
    double em = std::exp2(-2.0 * pg.c0); // 2^{-2 C0}

    double k1a = (-n1 * (e * (p + nr) - (p + nr)) + p * e * (n1 - nr)) /
                 (e * (p + n1) - (p + nr));
    double k1b_den = (p + nr) * (e - 1.0) * ((n1 + p) * (n1 + p) - n1 * n1 * em) +
                     (nr - n1) * p * p;
    double k1b = p * (1.0 - p * (n1 + p) * (n1 + p) * (e - 1.0) / k1b_den);

    const double slack = 1e-9 * p;
    double k1;
    bool a_in = (k1a >= -slack && k1a <= p + slack);
    bool b_in = (k1b >= -slack && k1b <= p + slack);
    if (a_in && b_in) {
        // boundary regime; the roots coincide there
        k1 = pg.relay_saturated() ? k1a : k1b;
    } else if (a_in) {
        k1 = k1a;
    } else if (b_in) {
        k1 = k1b;
    } else {
        throw std::runtime_error("optimal_covariance: no root in [0, P]");
    }
    k1 = std::min(std::max(k1, 0.0), p);

    CovPoint c;
    c.k1 = k1;
    c.k2 = (k1 + n1) * (p + nr) / ((p + n1) * e);
    double rad = (p - k1) * (p + nr - c.k2);
    c.rho = (p - std::sqrt(std::max(rad, 0.0))) / std::sqrt(k1 * c.k2);
    return c;
}

/// Inner objective of the trigonometric bound, defined for
/// omega in (pi/2 - theta, pi/2] where sin^2(theta) > cos^2(omega).
inline double h_theta(const PrimitiveGaussianParams& pg, double theta, double omega) {
    double st2 = std::sin(theta) * std::sin(theta);
    double co = std::cos(omega);
    double so2 = std::sin(omega) * std::sin(omega);
    double denom = st2 - co * co;
    if (!(denom > 0.0))
        throw std::domain_error("h_theta: omega outside (pi/2 - theta, pi/2]");
    double num = (pg.s12 + pg.s13 + so2 - 2.0 * co * std::sqrt(pg.s12 * pg.s13)) * st2;
    return 0.5 * std::log2(num / ((pg.s13 + 1.0) * denom));
}

/// cos of the minimizing omega for fixed theta: the smaller root of
///   x^2 - ((S12 + S13 + cos^2 theta) / sqrt(S12 S13)) x + sin^2 theta = 0.
inline double cos_omega_star(const PrimitiveGaussianParams& pg, double theta) {
    if (!(pg.s12 > 0.0) || !(pg.s13 > 0.0))
        throw std::domain_error("cos_omega_star: positive S12, S13 required");
    double ct2 = std::cos(theta) * std::cos(theta);
    double disc = (pg.s12 - pg.s13) * (pg.s12 - pg.s13) +
                  ct2 * (4.0 * pg.s12 * pg.s13 + 2.0 * pg.s12 + 2.0 * pg.s13 + ct2);
    return (pg.s13 + pg.s12 + ct2 - std::sqrt(disc)) / (2.0 * std::sqrt(pg.s12 * pg.s13));
}

/// sin^2 of the maximizing theta in the unsaturated regime
/// (requires S12 <= S13 + S23 + S13 S23; equals 1 at the boundary).
inline double sin2_theta_star(const PrimitiveGaussianParams& pg) {
    double s23 = pg.s23();
    double thresh = pg.s13 + s23 + pg.s13 * s23;
    if (pg.s12 > thresh + 1e-12 * std::max(1.0, thresh))
        throw std::domain_error("sin2_theta_star: defined only for S12 < S13+S23+S13*S23");
    double v = (1.0 + s23 * pg.s12 / ((pg.s13 + 1.0) * (s23 + 1.0) - 1.0)) / (1.0 + s23);
    return std::min(v, 1.0);
}

/// Trigonometric upper bound evaluated through its closed-form inner
/// minimizer and outer maximizer. At the regime boundary both branches are
/// evaluated and the larger kept (they agree by continuity).
inline double wu_bound(const PrimitiveGaussianParams& pg) {
    if (!(pg.s12 > 0.0) || !(pg.s13 > 0.0))
        throw std::domain_error("wu_bound: positive S12, S13 required");
    double base = 0.5 * std::log2(1.0 + pg.s13);
    double thresh = pg.s13 + pg.s23() + pg.s13 * pg.s23();

    auto case1 = [&]() {
        double theta = std::numbers::pi / 2.0;
        double co = cos_omega_star(pg, theta);
        double omega = std::acos(std::min(std::max(co, -1.0), 1.0));
        return base + std::min(pg.c0, h_theta(pg, theta, omega));
    };
    auto case2 = [&]() {
        double s2 = sin2_theta_star(pg);
        double theta = std::asin(std::sqrt(s2));
        double co = cos_omega_star(pg, theta);
        double omega = std::acos(std::min(std::max(co, -1.0), 1.0));
        return base + std::min(pg.c0 + 0.5 * std::log2(s2), h_theta(pg, theta, omega));
    };

    const double tol = 1e-12 * std::max(1.0, thresh);
    if (pg.s12 > thresh + tol) return case1();
    if (pg.s12 < thresh - tol) return case2();
    return std::max(case1(), case2());
}

}  // namespace relay::primitive
