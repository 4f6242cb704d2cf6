#pragma once

// Independent reference computations for the tests. Nothing here calls the
// integrator: constant-h profiles admit the first integral
//     Q = x (sin(theta) - H x) / (4 + kappa x^2),
// so x is an explicit function of theta and heights reduce to 1D quadratures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n) {
    std::vector<double> nodes(n), weights(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        nodes[i] = t;
        weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return {nodes, weights};
}

// Composite 16-point rule over equal panels.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 64) {
    static const auto rule = gauss_legendre_rule(16);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.first.size(); ++i)
            sum += rule.second[i] * f(mid + 0.5 * h * rule.first[i]);
    }
    return 0.5 * h * sum;
}

struct Space {
    double kappa;
    double tau;
};

inline double first_integral(Space sp, double H, double x, double theta) {
    return x * (std::sin(theta) - H * x) / (4.0 + sp.kappa * x * x);
}

// Positive root of (H + Q kappa) x^2 - sin(theta) x + 4Q = 0 nearest to `near`.
inline double x_on_level(Space sp, double H, double Q, double theta, double near) {
    const double a = H + Q * sp.kappa;
    const double b = -std::sin(theta);
    const double c = 4.0 * Q;
    const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
    const double r1 = (-b + disc) / (2.0 * a);
    const double r2 = (-b - disc) / (2.0 * a);
    if (r2 <= 0.0) return r1;
    if (r1 <= 0.0) return r2;
    return std::abs(r1 - near) < std::abs(r2 - near) ? r1 : r2;
}

// dz/dtheta along a constant-h profile.
inline double dz_dtheta(Space sp, double H, double x, double theta) {
    const double w = std::sqrt(1.0 + sp.tau * sp.tau * x * x);
    const double f = (4.0 - sp.kappa * x * x) / x;
    return 4.0 * std::sin(theta) * w / (8.0 * H - f * std::sin(theta));
}

// Vertical cylinder radius: theta = pi/2 stationary.
inline double e0(Space sp, double H) {
    if (sp.kappa == 0.0) return 1.0 / (2.0 * H);
    return (-8.0 * H + std::sqrt(64.0 * H * H + 16.0 * sp.kappa)) / (2.0 * sp.kappa);
}

// theta = 3pi/2 stationary; kappa > 0 only.
inline double e_minus(Space sp, double H) {
    return (8.0 * H + std::sqrt(64.0 * H * H + 16.0 * sp.kappa)) / (2.0 * sp.kappa);
}

// The sphere through the axis has Q = 0, so sin(theta) = H x.
inline double sphere_height(Space sp, double H) {
    const auto g = [&](double th) {
        const double x = std::sin(th) / H;
        const double w = std::sqrt(1.0 + sp.tau * sp.tau * x * x);
        return 4.0 * std::sin(th) * w / (H * (4.0 + sp.kappa * x * x));
    };
    return 2.0 * integrate(g, 0.0, pi / 2.0);
}

// Radii on y = 0 of the constant-h orbit through (x0, theta = pi/2).
struct LevelRadii {
    double Q;
    double other_upper;  // second root at theta = pi/2 (unduloid bulge)
    double omega_x;      // boundary contact at theta = pi (nodoid)
    double lower;        // root at theta = 3pi/2 (nodoid inner radius)
};

inline LevelRadii level_radii(Space sp, double H, double x0) {
    const double Q = first_integral(sp, H, x0, pi / 2.0);
    const double a = H + Q * sp.kappa;
    LevelRadii r{};
    r.Q = Q;
    r.other_upper = 4.0 * Q / (a * x0);
    r.omega_x = Q < 0.0 ? std::sqrt(-4.0 * Q / a) : NAN;
    r.lower = (-1.0 + std::sqrt(1.0 - 16.0 * a * Q)) / (2.0 * a);
    return r;
}

// Height change along the constant-h orbit from theta_a to theta_b (theta monotone on the piece),
// following the branch that passes through x_start at theta_a.
inline double height_change(Space sp, double H, double Q, double theta_a, double theta_b, double x_start,
                            int panels = 256) {
    double x_prev = x_start;
    // Follow the branch by continuity across panels.
    const double step = (theta_b - theta_a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = theta_a + p * step;
        const double b = a + step;
        const double guess = x_prev;
        total += integrate([&](double th) { return dz_dtheta(sp, H, x_on_level(sp, H, Q, th, guess), th); }, a, b, 1);
        x_prev = x_on_level(sp, H, Q, b, guess);
    }
    return total;
}

// Torus gap for constant h: arc anchored at the boundary contact (x1, theta = pi).
struct GapOracle {
    double I1;
    double I2;
    double x_upper;
    double x_lower;
};

inline GapOracle constant_gap(Space sp, double H, double x1) {
    const double Q = first_integral(sp, H, x1, pi);
    GapOracle g{};
    g.I2 = height_change(sp, H, Q, pi, pi / 2.0, x1) * -1.0;
    g.I1 = -height_change(sp, H, Q, pi, 1.5 * pi, x1);
    g.x_upper = x_on_level(sp, H, Q, pi / 2.0, x1);
    g.x_lower = x_on_level(sp, H, Q, 1.5 * pi, x1);
    return g;
}

// Euclidean unduloid through (x0, pi/2): one period of arc and its vertical pitch.
inline std::pair<double, double> euclid_unduloid_period(double H, double x0) {
    const double Q = x0 * (1.0 - H * x0) / 4.0;
    const double x1 = 1.0 / H - x0;
    const double c = 0.5 * (x0 + x1);
    const double r = 0.5 * (x1 - x0);
    const auto root = [&](double x) { return std::sqrt(H * (x + 4.0 * Q + H * x * x)); };
    const double arc = 2.0 * integrate([&](double u) {
        const double x = c + r * std::cos(u);
        return x / root(x);
    }, 0.0, pi);
    const double pitch = 2.0 * integrate([&](double u) {
        const double x = c + r * std::cos(u);
        return (4.0 * Q + H * x * x) / root(x);
    }, 0.0, pi);
    return {arc, pitch};
}

// Berger separatrix: Q = -H/kappa, so sin(theta) = -4H/(kappa x). Full z-drift of the two-sided orbit.
inline double berger_separatrix_drift(Space sp, double H) {
    const auto g = [&](double phi) {
        const double c = std::cos(phi);
        const double x = 4.0 * H / (sp.kappa * c);
        const double w = std::sqrt(1.0 + sp.tau * sp.tau * x * x);
        const double p = 4.0 + sp.kappa * x * x;
        return 16.0 * H * w / (sp.kappa * p * c);
    };
    return 2.0 * integrate(g, 0.0, pi / 2.0, 256);
}

// Hand-rolled generators.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

    // Knots (|y|, h) with h non-decreasing in |y|, i.e. non-increasing on [-1, 0].
    std::vector<std::pair<double, double>> monotone_table(double h0_lo, double h0_hi, double max_rise) {
        const int n = integer(3, 6);
        std::vector<double> ts{0.0};
        for (int i = 1; i < n - 1; ++i) ts.push_back(uniform(0.05, 0.95));
        ts.push_back(1.0);
        std::sort(ts.begin(), ts.end());
        std::vector<std::pair<double, double>> knots;
        double h = uniform(h0_lo, h0_hi);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i > 0 && ts[i] - ts[i - 1] < 1e-3) continue;
            knots.emplace_back(ts[i], h);
            h += uniform(0.0, max_rise / n);
        }
        if (knots.back().first != 1.0) knots.back().first = 1.0;
        return knots;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
