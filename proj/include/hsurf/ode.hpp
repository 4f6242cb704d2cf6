#pragma once

// Dormand-Prince 5(4) with PI step control and continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace hsurf::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    std::array<Vec<N>, 5> r{};

    double t1() const noexcept { return t0 + h; }

    Vec<N> eval(double t) const noexcept {
        const double u = h == 0.0 ? 0.0 : (t - t0) / h;
        const double u1 = 1.0 - u;
        Vec<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r[0][i] + u * (r[1][i] + u1 * (r[2][i] + u * (r[3][i] + u1 * r[4][i])));
        return y;
    }

    Vec<N> derivative(double t) const noexcept {
        const double u = h == 0.0 ? 0.0 : (t - t0) / h;
        const double u1 = 1.0 - u;
        Vec<N> d;
        for (std::size_t i = 0; i < N; ++i) {
            const double a = r[3][i] + u1 * r[4][i];
            const double b = r[2][i] + u * a;
            const double db = a - u * r[4][i];
            const double c = r[1][i] + u1 * b;
            const double dc = -b + u1 * db;
            d[i] = (c + u * dc) / h;
        }
        return d;
    }
};

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_min = 1e-14;  // relative to max(1, |t|)
    double safety = 0.9;
    double fac_min = 0.2;
    double fac_max = 10.0;
    double beta = 0.04;
    // Component measured against a fixed magnitude instead of its own size (angles).
    int fixed_index = -1;
    double fixed_magnitude = 1.0;
};

// One accepted step at a time. Rhs: Vec<N>(double t, const Vec<N>& y); non-finite output rejects the step.
template <std::size_t N, class Rhs>
class DormandPrince {
public:
    DormandPrince(Rhs rhs, StepControl ctl) : rhs_(std::move(rhs)), ctl_(ctl) {}

    // direction is +1 or -1; h0 <= 0 picks an initial step automatically.
    void reset(double t, const Vec<N>& y, int direction, double h0 = 0.0) {
        t_ = t;
        y_ = y;
        dir_ = direction >= 0 ? 1.0 : -1.0;
        f_ = rhs_(t_, y_);
        h_ = h0 > 0.0 ? h0 : initial_step();
        err_old_ = 1e-4;
        rejected_last_ = false;
    }

    // Takes one accepted step no longer than cap. Returns false on step-size underflow.
    bool step(double cap = std::numeric_limits<double>::infinity()) {
        double h = std::min(h_, cap);
        const double h_floor = ctl_.h_min * std::max(1.0, std::abs(t_));
        for (;;) {
            if (!(h >= h_floor)) return false;
            Vec<N> k2, k3, k4, k5, k6, k7, y1, yt;
            const double hs = dir_ * h;
            const Vec<N>& k1 = f_;
            for (std::size_t i = 0; i < N; ++i) yt[i] = y_[i] + hs * (a21 * k1[i]);
            k2 = rhs_(t_ + c2 * hs, yt);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y_[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            k3 = rhs_(t_ + c3 * hs, yt);
            for (std::size_t i = 0; i < N; ++i) yt[i] = y_[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs_(t_ + c4 * hs, yt);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y_[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs_(t_ + c5 * hs, yt);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y_[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = rhs_(t_ + hs, yt);
            for (std::size_t i = 0; i < N; ++i)
                y1[i] = y_[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            k7 = rhs_(t_ + hs, y1);

            double err = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < N; ++i) {
                const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = scale(i, std::max(std::abs(y_[i]), std::abs(y1[i])));
                err += (e / sc) * (e / sc);
                finite = finite && std::isfinite(y1[i]) && std::isfinite(k7[i]);
            }
            err = std::sqrt(err / N);
            if (!finite || !std::isfinite(err)) {
                h *= 0.25;
                rejected_last_ = true;
                continue;
            }

            const double expo = 0.2 - ctl_.beta * 0.75;
            const double fac11 = std::pow(err, expo);
            if (err <= 1.0) {
                double fac = fac11 / std::pow(err_old_, ctl_.beta);
                fac = std::clamp(fac / ctl_.safety, 1.0 / ctl_.fac_max, 1.0 / ctl_.fac_min);
                double h_new = h / fac;
                if (rejected_last_) h_new = std::min(h_new, h);
                err_old_ = std::max(err, 1e-4);

                DenseSegment<N> seg;
                seg.t0 = t_;
                seg.h = hs;
                for (std::size_t i = 0; i < N; ++i) {
                    const double diff = y1[i] - y_[i];
                    const double bspl = hs * k1[i] - diff;
                    seg.r[0][i] = y_[i];
                    seg.r[1][i] = diff;
                    seg.r[2][i] = bspl;
                    seg.r[3][i] = diff - hs * k7[i] - bspl;
                    seg.r[4][i] =
                        hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                segment_ = seg;
                t_ += hs;
                y_ = y1;
                f_ = k7;
                h_ = h_new;
                rejected_last_ = false;
                return true;
            }
            h /= std::min(1.0 / ctl_.fac_min, fac11 / ctl_.safety);
            rejected_last_ = true;
        }
    }

    double t() const noexcept { return t_; }
    const Vec<N>& y() const noexcept { return y_; }
    const Vec<N>& dydt() const noexcept { return f_; }
    const DenseSegment<N>& segment() const noexcept { return segment_; }
    double next_step() const noexcept { return h_; }

private:
    double scale(std::size_t i, double magnitude) const noexcept {
        if (static_cast<int>(i) == ctl_.fixed_index) magnitude = ctl_.fixed_magnitude;
        return ctl_.atol + ctl_.rtol * magnitude;
    }

    double initial_step() {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double mag = static_cast<int>(i) == ctl_.fixed_index ? ctl_.fixed_magnitude : std::abs(y_[i]);
            const double sc = scale(i, mag);
            d0 += (mag / sc) * (mag / sc);
            d1n += (f_[i] / sc) * (f_[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1n = std::sqrt(d1n / N);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        Vec<N> y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + dir_ * h0 * f_[i];
        const Vec<N> f1 = rhs_(t_ + dir_ * h0, y1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = scale(i, std::abs(y_[i]));
            d2 += ((f1[i] - f_[i]) / sc) * ((f1[i] - f_[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / h0;
        if (!std::isfinite(d2)) return h0 * 1e-3;
        const double dm = std::max(d1n, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min(100.0 * h0, h1);
    }

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Rhs rhs_;
    StepControl ctl_;
    double t_ = 0.0;
    Vec<N> y_{};
    Vec<N> f_{};
    double h_ = 0.0;
    double dir_ = 1.0;
    double err_old_ = 1e-4;
    bool rejected_last_ = false;
    DenseSegment<N> segment_{};
};

// Bisection for a sign change of g on [a, b] (either order); g(a), g(b) of opposite sign.
template <class G>
double bisect_root(G&& g, double a, double b, double ga, double tol_g, int max_iter = 200) {
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) return m;
        const double gm = g(m);
        if (std::abs(gm) <= tol_g) return m;
        if ((gm < 0.0) == (ga < 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace hsurf::ode
