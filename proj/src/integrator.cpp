#include "hsurf/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hsurf {

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::Y0Crossing: return "Y0Crossing";
        case EventKind::OmegaPlus: return "OmegaPlus";
        case EventKind::OmegaMinus: return "OmegaMinus";
        case EventKind::AxisContact: return "AxisContact";
        case EventKind::WallApproach: return "WallApproach";
        case EventKind::EscapeXMax: return "EscapeXMax";
        case EventKind::PeriodClosure: return "PeriodClosure";
        case EventKind::StallBudget: return "StallBudget";
    }
    return "?";
}

std::string_view to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Y0Count: return "y0-count";
        case StopReason::OmegaCount: return "omega-count";
        case StopReason::AxisContact: return "axis-contact";
        case StopReason::PeriodClosure: return "period-closure";
        case StopReason::ThetaTarget: return "theta-target";
        case StopReason::WallApproach: return "wall-approach";
        case StopReason::EscapeXMax: return "escape-x-max";
        case StopReason::Budget: return "budget";
    }
    return "?";
}

double Trajectory::s_begin() const { return samples.empty() ? 0.0 : samples.front().s; }
double Trajectory::s_end() const { return samples.empty() ? 0.0 : samples.back().s; }

AngularState Trajectory::at(double s) const {
    if (samples.empty()) fail(ErrorKind::Domain, "empty trajectory");
    s = std::clamp(s, s_begin(), s_end());
    if (segments.empty()) return samples.front();
    auto it = std::lower_bound(segments.begin(), segments.end(), s, [](const ode::DenseSegment<3>& seg, double v) {
        return std::max(seg.t0, seg.t1()) < v;
    });
    if (it == segments.end()) --it;
    const auto y = it->eval(s);
    return {s, y[0], y[1], y[2]};
}

std::vector<Event> Trajectory::events_of(EventKind kind) const {
    std::vector<Event> out;
    for (const auto& e : events)
        if (e.kind == kind) out.push_back(e);
    return out;
}

std::array<double, 2> rhs_phase(const AmbientSpace& space, const PrescribedH& h, const PhaseState& st) {
    if (!(st.x > 0.0)) fail(ErrorKind::Singularity, "phase field needs x > 0");
    const double t2 = space.tau() * space.tau();
    const double w2 = 1.0 + t2 * st.x * st.x;
    const double radicand = 1.0 - w2 * st.y * st.y;
    if (radicand < -1e-12) {
        std::ostringstream msg;
        msg << "state (x=" << st.x << ", y=" << st.y << ") lies beyond the boundary curve";
        fail(ErrorKind::Domain, msg.str());
    }
    const double p = 4.0 + space.kappa() * st.x * st.x;
    return {st.y, phase_numerator(space, h, st.eps, st.x, st.y) / (st.x * p * w2)};
}

std::array<double, 3> rhs_angular(const AmbientSpace& space, const PrescribedH& h, const AngularState& st) {
    if (!(st.x > 0.0)) fail(ErrorKind::Singularity, "angular field is singular on the axis; use axis_start");
    return angular_field(space, h, st.x, st.theta);
}

AngularState axis_start(const AmbientSpace& space, const PrescribedH& h, int orientation, double s_seed) {
    const double h1 = h.eval(1.0);
    const double beta = h1 * h1 + space.tau() * space.tau();
    const double x = s_seed - beta * s_seed * s_seed * s_seed / 6.0;
    if (orientation >= 0) return {s_seed, x, 0.5 * h1 * s_seed * s_seed, h1 * s_seed};
    return {-s_seed, x, -0.5 * h1 * s_seed * s_seed, std::numbers::pi - h1 * s_seed};
}

namespace {

enum class Watch { Y0, Omega, Axis, Wall, XMax, Theta };

struct Crossing {
    double t;
    Watch which;
};

struct AngularRhs {
    const AmbientSpace* space;
    const PrescribedH* h;
    ode::Vec<3> operator()(double, const ode::Vec<3>& y) const {
        const auto d = angular_field(*space, *h, y[0], y[2]);
        return {d[0], d[1], d[2]};
    }
};

struct Watcher {
    Watch which;
    double prev = 0.0;
    bool armed = false;
};

}  // namespace

Trajectory integrate(const AmbientSpace& space, const PrescribedH& h, const AngularState& init,
                     const StopSpec& stop, const Budget& budget, const IntegratorOptions& opts) {
    if (!space.in_domain(init.x)) {
        std::ostringstream msg;
        msg << "initial x=" << init.x << " outside the model domain";
        fail(ErrorKind::Domain, msg.str());
    }
    const double x_max = budget.x_max.value_or(space.default_x_max());
    const auto wall = space.wall_radius();
    const double wall_x = wall ? 0.999 * *wall : INFINITY;
    const int dir = opts.direction >= 0 ? 1 : -1;
    const auto breaks = h.breakpoints();

    using Stepper = ode::DormandPrince<3, AngularRhs>;
    ode::StepControl ctl;
    ctl.rtol = opts.rtol;
    ctl.atol = opts.atol;
    ctl.fixed_index = 2;  // theta is only defined mod 2 pi
    ctl.fixed_magnitude = std::numbers::pi;
    Stepper dp(AngularRhs{&space, &h}, ctl);
    dp.reset(init.s, {init.x, init.z, init.theta}, dir);

    auto g_of = [&](Watch w, const ode::Vec<3>& y) {
        switch (w) {
            case Watch::Y0: return std::cos(y[2]);
            case Watch::Omega: return std::sin(y[2]);
            case Watch::Axis: return y[0] - opts.axis_stop;
            case Watch::Wall: return y[0] - wall_x;
            case Watch::XMax: return y[0] - x_max;
            case Watch::Theta: return y[2] - *stop.theta_target;
        }
        return 0.0;
    };
    auto g_tol = [&](Watch w, const ode::Vec<3>& y) {
        switch (w) {
            case Watch::Y0:
            case Watch::Omega: return 1e-13;
            case Watch::Theta: return 1e-13 * std::max(1.0, std::abs(*stop.theta_target));
            default: return 1e-13 * std::max(1.0, std::abs(y[0]));
        }
    };

    std::vector<Watcher> watchers{{Watch::Y0}, {Watch::Omega}, {Watch::Axis}, {Watch::XMax}};
    if (wall) watchers.push_back({Watch::Wall});
    if (stop.theta_target) watchers.push_back({Watch::Theta});
    const ode::Vec<3> y_init{init.x, init.z, init.theta};
    for (auto& w : watchers) {
        w.prev = g_of(w.which, y_init);
        w.armed = std::abs(w.prev) > g_tol(w.which, y_init);
    }

    Trajectory traj;
    traj.samples.push_back(init);
    int n_y0 = 0, n_plus = 0, n_minus = 0, n_events = 0;
    long steps = 0;
    bool done = false;

    auto state_at = [](const ode::DenseSegment<3>& seg, double t) {
        const auto y = seg.eval(t);
        return AngularState{t, y[0], y[1], y[2]};
    };
    auto finish = [&](StopReason reason) {
        traj.stop = reason;
        done = true;
    };

    while (!done) {
        if (steps >= budget.max_steps) {
            traj.events.push_back({EventKind::StallBudget, dp.t(), traj.samples.back()});
            finish(StopReason::Budget);
            break;
        }
        const double used = std::abs(dp.t() - init.s);
        const double remaining = budget.max_arc - used;
        if (remaining <= 0.0) {
            traj.events.push_back({EventKind::StallBudget, dp.t(), traj.samples.back()});
            finish(StopReason::Budget);
            break;
        }

        const Stepper saved = dp;
        if (!dp.step(remaining)) {
            throw StiffnessError("step size underflow", traj.samples.back());
        }
        if (!breaks.empty() && std::abs(dp.segment().h) > opts.band_clamp) {
            const double a0 = std::abs(frame(space, saved.y()[0], saved.y()[2]).nu);
            const double a1 = std::abs(frame(space, dp.y()[0], dp.y()[2]).nu);
            const bool straddles = std::any_of(breaks.begin(), breaks.end(),
                                               [&](double b) { return (a0 - b) * (a1 - b) < 0.0; });
            if (straddles) {
                dp = saved;
                if (!dp.step(std::min(remaining, opts.band_clamp)))
                    throw StiffnessError("step size underflow near a breakpoint of h", traj.samples.back());
            }
        }
        ++steps;
        const auto& seg = dp.segment();
        traj.segments.push_back(seg);

        std::vector<Crossing> hits;
        for (auto& w : watchers) {
            const double g1 = g_of(w.which, dp.y());
            if (!w.armed) {
                if (std::abs(g1) > g_tol(w.which, dp.y())) {
                    w.armed = true;
                    w.prev = g1;
                }
                continue;
            }
            if ((g1 < 0.0) != (w.prev < 0.0) || g1 == 0.0) {
                auto g = [&](double t) { return g_of(w.which, seg.eval(t)); };
                const double t = ode::bisect_root(g, seg.t0, seg.t1(), w.prev, g_tol(w.which, dp.y()));
                hits.push_back({t, w.which});
            }
            w.prev = g1;
        }
        std::sort(hits.begin(), hits.end(), [&](const Crossing& a, const Crossing& b) {
            return std::abs(a.t - seg.t0) < std::abs(b.t - seg.t0);
        });

        for (const auto& hit : hits) {
            const AngularState st = state_at(seg, hit.t);
            const auto d = angular_field(space, h, st.x, st.theta);
            auto record = [&](EventKind kind) {
                traj.events.push_back({kind, st.s, st});
                ++n_events;
            };
            bool terminal = false;
            switch (hit.which) {
                case Watch::Y0: {
                    record(EventKind::Y0Crossing);
                    ++n_y0;
                    if (stop.period) {
                        const auto& ref = *stop.period;
                        const int tdir = d[2] * dir > 0.0 ? 1 : -1;
                        const double dist = std::abs(st.x - ref.x) + std::abs(nu_of(space, st) - ref.nu);
                        if (tdir == ref.theta_direction && dist < ref.tolerance) {
                            record(EventKind::PeriodClosure);
                            finish(StopReason::PeriodClosure);
                            terminal = true;
                            break;
                        }
                    }
                    if (stop.y0_crossings > 0 && n_y0 >= stop.y0_crossings) {
                        finish(StopReason::Y0Count);
                        terminal = true;
                    }
                    break;
                }
                case Watch::Omega: {
                    const bool plus = std::cos(st.theta) > 0.0;
                    record(plus ? EventKind::OmegaPlus : EventKind::OmegaMinus);
                    (plus ? n_plus : n_minus) += 1;
                    if ((stop.omega_plus > 0 && n_plus >= stop.omega_plus) ||
                        (stop.omega_minus > 0 && n_minus >= stop.omega_minus) ||
                        (stop.omega_any > 0 && n_plus + n_minus >= stop.omega_any)) {
                        finish(StopReason::OmegaCount);
                        terminal = true;
                    }
                    break;
                }
                case Watch::Axis: {
                    const bool approaching = d[0] * dir < 0.0;
                    if (approaching && std::abs(nu_of(space, st)) > 0.9) {
                        record(EventKind::AxisContact);
                        finish(StopReason::AxisContact);
                        terminal = true;
                    }
                    break;
                }
                case Watch::Wall:
                    if (d[0] * dir > 0.0) {
                        record(EventKind::WallApproach);
                        finish(StopReason::WallApproach);
                        terminal = true;
                    }
                    break;
                case Watch::XMax:
                    if (d[0] * dir > 0.0) {
                        record(EventKind::EscapeXMax);
                        finish(StopReason::EscapeXMax);
                        terminal = true;
                    }
                    break;
                case Watch::Theta:
                    finish(StopReason::ThetaTarget);
                    terminal = true;
                    break;
            }
            if ((st.s - traj.samples.back().s) * dir > 0.0) traj.samples.push_back(st);
            if (terminal) break;
            if (n_events >= budget.max_events) {
                traj.events.push_back({EventKind::StallBudget, st.s, st});
                finish(StopReason::Budget);
                break;
            }
        }
        if (done) break;

        const AngularState end{dp.t(), dp.y()[0], dp.y()[1], dp.y()[2]};
        if ((end.s - traj.samples.back().s) * dir > 0.0) traj.samples.push_back(end);
        if (end.x <= opts.x_floor) {
            std::ostringstream msg;
            msg << "x=" << end.x << " reached the floor without an axis-contact signature (nu="
                << nu_of(space, end) << ")";
            fail(ErrorKind::Geometry, msg.str());
        }
    }

    if (dir < 0) {
        std::reverse(traj.samples.begin(), traj.samples.end());
        std::reverse(traj.events.begin(), traj.events.end());
        std::reverse(traj.segments.begin(), traj.segments.end());
    }
    return traj;
}

double curvature_residual_at(const AmbientSpace& space, const PrescribedH& h, const AngularState& st) {
    const double st_sin = std::sin(st.theta);
    if (!(st.x > 0.0) || st.x * std::abs(st_sin) < 1e-6) return NAN;
    const auto fr = frame(space, st.x, st.theta);
    const double k = space.kappa();
    const double t2 = space.tau() * space.tau();
    const double xp = fr.nu;
    const double xpp = x_second_derivative(space, h, st.x, st.theta);
    const double w2 = fr.w * fr.w;
    const double num = st.x * (-xpp * fr.p * w2 + st.x * xp * xp * (k - 8.0 * t2) - k * st.x) - 4.0 * xp * xp + 4.0;
    // eps * 4x sqrt(1 - x'^2 w^2) = 4x sin(theta)
    const double mean = num / (8.0 * st.x * st_sin);
    return std::abs(mean - h.eval(std::clamp(fr.nu, -1.0, 1.0)));
}

double curvature_residual(const AmbientSpace& space, const PrescribedH& h, const Trajectory& traj) {
    double worst = 0.0;
    for (const auto& st : traj.samples) {
        const double r = curvature_residual_at(space, h, st);
        if (std::isfinite(r)) worst = std::max(worst, r);
    }
    return worst;
}

double arc_length_defect(const AmbientSpace& space, const PrescribedH& h, const AngularState& st) {
    const auto [gxx, gzz] = space.metric_coeffs(st.x);
    const auto d = angular_field(space, h, st.x, st.theta);
    return gxx * d[0] * d[0] + gzz * d[1] * d[1] - 1.0;
}

}  // namespace hsurf
