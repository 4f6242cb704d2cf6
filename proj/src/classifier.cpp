#include "hsurf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hsurf {

namespace {

constexpr double kPi = std::numbers::pi;

Budget resolved(const AmbientSpace& space, Budget b) {
    if (!b.x_max) b.x_max = space.default_x_max();
    return b;
}

std::string describe(const Trajectory& traj) {
    std::ostringstream out;
    out << "stop=" << to_string(traj.stop) << " events=[";
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
        if (i) out << ", ";
        out << to_string(traj.events[i].kind) << "@x=" << traj.events[i].state.x;
    }
    out << "]";
    return out.str();
}

// Regularized chart near x = infinity for kappa > 0: state (u = 1/x, z, theta), independent variable sigma.
struct PoleRhs {
    const AmbientSpace* space;
    const PrescribedH* h;
    ode::Vec<3> operator()(double, const ode::Vec<3>& y) const {
        const double k = space->kappa();
        const double t = space->tau();
        const double u = y[0];
        const double th = y[2];
        const double st = std::sin(th);
        const double ct = std::cos(th);
        const double root = std::sqrt(u * u + t * t);
        const double nu = std::clamp(u * ct / root, -1.0, 1.0);
        if (!std::isfinite(nu)) return {NAN, NAN, NAN};
        return {-u * ct * (1.0 + 4.0 * u * u / k), 4.0 / k * st * root,
                st * (1.0 - 4.0 * u * u / k) + 8.0 * u / k * h->eval(nu)};
    }
};

using PoleStepper = ode::DormandPrince<3, PoleRhs>;

PoleStepper pole_stepper(const AmbientSpace& space, const PrescribedH& h, double xi) {
    ode::StepControl ctl;
    ctl.rtol = 1e-12;
    ctl.atol = 1e-14;
    PoleStepper dp(PoleRhs{&space, &h}, ctl);
    dp.reset(0.0, {1.0 / xi, 0.0, 1.5 * kPi}, 1);
    return dp;
}

// Height gained from the seed to the antipodal pole along the pole chart.
double pole_half_drift(const AmbientSpace& space, const PrescribedH& h, double xi, double u_stop) {
    auto dp = pole_stepper(space, h, xi);
    for (long steps = 0; steps < 2'000'000 && dp.t() < 500.0; ++steps) {
        const double u_prev = dp.y()[0];
        if (!dp.step()) break;
        if (dp.y()[0] <= u_stop) {
            const auto& seg = dp.segment();
            auto g = [&](double t) { return seg.eval(t)[0] - u_stop; };
            const double t = ode::bisect_root(g, seg.t0, seg.t1(), u_prev - u_stop, 1e-16);
            const auto y = seg.eval(t);
            // tail along the stable direction of the saddle: z_sigma ~ -(16 tau h(0) / kappa^2) u
            const double k = space.kappa();
            const double tail = -16.0 * space.tau() * h.eval(0.0) / (k * k) * y[0];
            return y[1] + tail;
        }
    }
    fail(ErrorKind::SearchFailure, "pole orbit did not reach the antipodal pole");
}

std::vector<double> uniform(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(std::max(n, 2)));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a + (b - a) * static_cast<double>(i) / (v.size() - 1);
    return v;
}

}  // namespace

std::string tag_of(const SurfaceClass& sc) {
    static constexpr const char* names[] = {"Cylinder", "Sphere", "Unduloid", "Nodoid", "TorusS2xR", "TorusRotational",
                                            "BergerPoleChain"};
    return names[sc.index()];
}

namespace {

nlohmann::ordered_json compactness_json(const Compactness& c) {
    nlohmann::ordered_json j;
    switch (c.kind) {
        case Compactness::Kind::EmbeddedTorus: j["kind"] = "EmbeddedTorus"; break;
        case Compactness::Kind::ImmersedTorus: j["kind"] = "ImmersedTorus"; break;
        case Compactness::Kind::DenseNoncompact: j["kind"] = "DenseNoncompact"; break;
    }
    if (c.kind != Compactness::Kind::DenseNoncompact) {
        j["p"] = c.p;
        j["q"] = c.q;
    }
    return j;
}

nlohmann::ordered_json nodoid_json(const Nodoid& n) {
    nlohmann::ordered_json j;
    j["outer_x0"] = n.outer;
    j["omega_x1"] = n.omega_x;
    j["inner_x2"] = n.inner;
    j["z0"] = n.z0;
    j["z2"] = n.z2;
    j["closes"] = n.closes;
    j["closure_residual"] = n.closure_residual;
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const SurfaceClass& sc, const std::optional<std::string>& trajectory_ref) {
    nlohmann::ordered_json j;
    j["tag"] = tag_of(sc);
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Cylinder>) {
                j["radius"] = v.radius;
                j["cmc"] = v.cmc;
                j["hopf_torus"] = v.hopf_torus;
            } else if constexpr (std::is_same_v<T, Sphere>) {
                j["r0"] = v.r0;
                j["height"] = v.height;
                if (v.embedded) j["embedded"] = *v.embedded;
                else j["embedded"] = nullptr;
            } else if constexpr (std::is_same_v<T, Unduloid>) {
                j["neck_x0"] = v.neck;
                j["bulge_x1"] = v.bulge;
                j["period_arc"] = v.period_arc;
                j["z_pitch"] = v.z_pitch;
                j["closure_residual"] = v.closure_residual;
                j["phase_eps"] = sign_of(v.phase);
            } else if constexpr (std::is_same_v<T, Nodoid>) {
                const auto fields = nodoid_json(v);
                for (auto it = fields.begin(); it != fields.end(); ++it) j[it.key()] = it.value();
            } else if constexpr (std::is_same_v<T, TorusS2xR>) {
                j["x1"] = v.x1;
                j["closure_residual"] = v.closure_residual;
            } else if constexpr (std::is_same_v<T, TorusRotational>) {
                j["lambda0"] = v.lambda0;
                j["nodoid"] = nodoid_json(v.nodoid);
            } else if constexpr (std::is_same_v<T, BergerPoleChain>) {
                j["xi0"] = v.xi0;
                j["bracket"] = {v.bracket_lo, v.bracket_hi};
                j["bisection_steps"] = v.bisection_steps;
                j["z_drift"] = v.z_drift;
                j["compactness"] = compactness_json(v.compactness);
                j["escape_x"] = v.escape_x;
                j["escape_nu"] = v.escape_nu;
            }
        },
        sc);
    if (trajectory_ref) j["trajectory_ref"] = *trajectory_ref;
    else j["trajectory_ref"] = nullptr;
    return j;
}

Cylinder build_cylinder(const AmbientSpace& space, const PrescribedH& h) {
    const auto e = equilibrium(space, h, Eps::Plus);
    return {e->x, h.eval(0.0), space.kappa() > 0.0 && space.tau() > 0.0};
}

Sphere shoot_sphere(const AmbientSpace& space, const PrescribedH& h, const ClassifierOptions& opts) {
    StopSpec stop;
    stop.y0_crossings = 1;
    auto traj = integrate(space, h, axis_start(space, h, 1, opts.s_seed), stop, resolved(space, opts.budget),
                          opts.integrator);
    if (traj.stop != StopReason::Y0Count)
        fail(ErrorKind::Classification, "sphere orbit did not reach y = 0: " + describe(traj));
    const auto& eq = traj.events.back();
    Sphere sp{eq.state.x, 2.0 * eq.state.z, std::nullopt, std::move(traj)};
    if (auto period = space.vertical_period()) sp.embedded = sp.height < *period;
    return sp;
}

namespace {

Unduloid trace_closed_orbit(const AmbientSpace& space, const PrescribedH& h, double x0, Eps eps,
                            const ClassifierOptions& opts) {
    const double theta0 = eps == Eps::Plus ? 0.5 * kPi : 1.5 * kPi;
    const auto d = angular_field(space, h, x0, theta0);
    if (d[2] == 0.0) fail(ErrorKind::AmbiguousSeed, "seed is an equilibrium");
    StopSpec stop;
    stop.y0_crossings = 2;
    stop.omega_any = 1;
    stop.period = PeriodReference{x0, 0.0, d[2] > 0.0 ? 1 : -1, opts.period_tol};
    auto traj = integrate(space, h, {0.0, x0, 0.0, theta0}, stop, resolved(space, opts.budget), opts.integrator);
    if (traj.stop == StopReason::OmegaCount)
        fail(ErrorKind::Classification, "orbit reached the boundary curve; not an unduloid: " + describe(traj));
    if (traj.stop != StopReason::PeriodClosure && traj.stop != StopReason::Y0Count)
        fail(ErrorKind::Classification, "orbit did not return to y = 0: " + describe(traj));
    const auto crossings = traj.events_of(EventKind::Y0Crossing);
    const auto& back = crossings.back().state;
    const double other = crossings.front().state.x;
    Unduloid u;
    u.neck = std::min(x0, other);
    u.bulge = std::max(x0, other);
    u.period_arc = back.s;
    u.z_pitch = back.z;
    u.closure_residual = std::abs(back.x - x0) + std::abs(nu_of(space, back));
    u.phase = eps;
    u.orbit = std::move(traj);
    return u;
}

}  // namespace

Unduloid trace_unduloid(const AmbientSpace& space, const PrescribedH& h, double x0, const ClassifierOptions& opts) {
    if (!(x0 > 0.0) || !space.in_domain(x0)) fail(ErrorKind::Seed, "neck seed must lie in the model domain");
    const double e0 = equilibrium(space, h, Eps::Plus)->x;
    if (x0 >= e0) {
        const double r0 = shoot_sphere(space, h, opts).r0;
        std::ostringstream msg;
        if (x0 >= r0) {
            msg << "x0=" << x0 << " is at or beyond the sphere equator r0=" << r0;
            fail(ErrorKind::NotAnUnduloid, msg.str());
        }
        msg << "x0=" << x0 << " is not below the equilibrium e0=" << e0;
        fail(ErrorKind::SeedWrongSide, msg.str());
    }
    return trace_closed_orbit(space, h, x0, Eps::Plus, opts);
}

Nodoid trace_nodoid(const AmbientSpace& space, const PrescribedH& h, double x0, const ClassifierOptions& opts) {
    const double r0 = shoot_sphere(space, h, opts).r0;
    if (!(x0 > r0) || !space.in_domain(x0)) {
        std::ostringstream msg;
        msg << "nodoid seed x0=" << x0 << " must exceed the sphere equator r0=" << r0;
        fail(ErrorKind::Seed, msg.str());
    }
    const auto budget = resolved(space, opts.budget);
    StopSpec fwd_stop;
    fwd_stop.omega_plus = 1;
    auto fwd = integrate(space, h, {0.0, x0, 0.0, 0.5 * kPi}, fwd_stop, budget, opts.integrator);
    const auto& ev = fwd.events;
    const bool ordered = fwd.stop == StopReason::OmegaCount && ev.size() == 3 &&
                         ev[0].kind == EventKind::OmegaMinus && ev[1].kind == EventKind::Y0Crossing &&
                         ev[2].kind == EventKind::OmegaPlus;
    if (!ordered) fail(ErrorKind::Classification, "nodoid event sequence broken: " + describe(fwd));

    StopSpec back_stop;
    back_stop.omega_any = 1;
    auto bopts = opts.integrator;
    bopts.direction = -1;
    auto bwd = integrate(space, h, {0.0, x0, 0.0, 0.5 * kPi}, back_stop, budget, bopts);
    if (bwd.stop != StopReason::OmegaCount) fail(ErrorKind::Classification, "backward nodoid arc: " + describe(bwd));

    Nodoid n;
    n.outer = x0;
    n.omega_x = ev[0].state.x;
    n.inner = ev[1].state.x;
    n.z0 = ev[0].state.z;
    n.z2 = ev[2].state.z;
    n.closure_residual = std::abs(n.z2 + n.z0);
    n.closes = n.closure_residual < opts.closure_tol;
    n.forward = std::move(fwd);
    n.backward = std::move(bwd);
    return n;
}

TorusS2xR s2r_torus(const AmbientSpace& space, const PrescribedH& h, const ClassifierOptions& opts) {
    if (!(space.kappa() > 0.0) || space.tau() != 0.0)
        fail(ErrorKind::Unsupported, "the equator torus needs kappa > 0 and tau = 0");
    const double x_eq = 2.0 / std::sqrt(space.kappa());
    StopSpec stop;
    stop.theta_target = 2.0 * kPi;
    auto traj = integrate(space, h, {0.0, x_eq, 0.0, 0.0}, stop, resolved(space, opts.budget), opts.integrator);
    if (traj.stop != StopReason::ThetaTarget)
        fail(ErrorKind::Classification, "equator orbit did not complete a turn: " + describe(traj));
    const auto crossings = traj.events_of(EventKind::Y0Crossing);
    if (crossings.empty()) fail(ErrorKind::Classification, "equator orbit never crossed y = 0");
    const auto& end = traj.samples.back();
    TorusS2xR t;
    t.x1 = crossings.front().state.x;
    t.closure_residual = std::abs(end.x - x_eq) + std::abs(end.z) + std::abs(nu_of(space, end) - 1.0);
    t.profile = std::move(traj);
    return t;
}

PoleShot berger_pole_shot(const AmbientSpace& space, const PrescribedH& h, double xi) {
    auto dp = pole_stepper(space, h, xi);
    const double start = 1.5 * kPi;
    bool moved = false;
    double prev = 0.0;
    for (long steps = 0; steps < 2'000'000 && dp.t() < 500.0; ++steps) {
        if (!dp.step()) return PoleShot::Undecided;
        const double th = dp.y()[2];
        if (std::sin(th) >= 0.0) return PoleShot::ReachesBoundary;
        const double g = th - start;
        if (!moved) {
            moved = std::abs(g) > 1e-13;
            prev = g;
            continue;
        }
        if ((g < 0.0) != (prev < 0.0)) return PoleShot::Returns;
        prev = g;
        if (!(dp.y()[0] > 0.0)) return PoleShot::Undecided;
    }
    return PoleShot::Undecided;
}

Compactness berger_compactness(double drift, const AmbientSpace& space, long max_denominator) {
    const auto period = space.vertical_period();
    if (!period) fail(ErrorKind::Unsupported, "compactness needs kappa > 0 and tau > 0");
    const double ratio = std::abs(drift) / *period;
    const double tol = 1e-9;
    // continued fraction convergents
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = ratio;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        const long ai = static_cast<long>(a);
        const long p2 = ai * p1 + p0;
        const long q2 = ai * q1 + q0;
        if (q2 > max_denominator) break;
        if (q2 > 0 && std::abs(ratio - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) {
            if (p2 == 0) break;
            if (p2 == 1) return {Compactness::Kind::EmbeddedTorus, 1, q2};
            return {Compactness::Kind::ImmersedTorus, p2, q2};
        }
        const double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return {Compactness::Kind::DenseNoncompact, 0, 0};
}

BergerPoleChain berger_pole_orbit(const AmbientSpace& space, const PrescribedH& h, const ClassifierOptions& opts) {
    if (!(space.kappa() > 0.0 && space.tau() > 0.0))
        fail(ErrorKind::Unsupported, "pole orbits exist for kappa > 0 and tau > 0 only");
    const double e1 = equilibrium(space, h, Eps::Minus)->x;
    double lo = 1e-2 * e1;
    double hi = e1 * (1.0 - 1e-3);
    const auto at_lo = berger_pole_shot(space, h, lo);
    const auto at_hi = berger_pole_shot(space, h, hi);
    if (at_lo != PoleShot::ReachesBoundary || at_hi != PoleShot::Returns) {
        std::ostringstream msg;
        msg << "no bracket: xi=" << lo << " -> " << static_cast<int>(at_lo) << ", xi=" << hi << " -> "
            << static_cast<int>(at_hi);
        fail(ErrorKind::SearchFailure, msg.str());
    }
    int steps = 0;
    while (hi - lo > 1e-13 * hi && steps < 200) {
        const double mid = 0.5 * (lo + hi);
        const auto shot = berger_pole_shot(space, h, mid);
        ++steps;
        if (shot == PoleShot::ReachesBoundary) lo = mid;
        else if (shot == PoleShot::Returns) hi = mid;
        else {
            lo = hi = mid;
            break;
        }
    }
    BergerPoleChain chain;
    chain.xi0 = 0.5 * (lo + hi);
    chain.bracket_lo = lo;
    chain.bracket_hi = hi;
    chain.bisection_steps = steps;

    const double u_stop = 1e-5;
    const double half = 0.5 * (pole_half_drift(space, h, lo, u_stop) + pole_half_drift(space, h, hi, u_stop));
    chain.z_drift = 2.0 * std::abs(half);
    chain.compactness = berger_compactness(chain.z_drift, space);

    // escape in the original chart
    const double x_escape = std::max(opts.budget.x_max.value_or(space.default_x_max()),
                                     2.0 / (space.tau() * opts.nu_tol));
    Budget b = opts.budget;
    b.x_max = x_escape;
    b.max_arc = std::max(b.max_arc, 10.0 * x_escape * x_escape);
    StopSpec stop;
    stop.omega_any = 1;
    stop.y0_crossings = 1;
    auto traj = integrate(space, h, {0.0, chain.xi0, 0.0, 1.5 * kPi}, stop, b, opts.integrator);
    if (traj.stop != StopReason::EscapeXMax)
        fail(ErrorKind::SearchFailure, "separatrix seed did not escape: " + describe(traj));
    chain.escape_x = traj.samples.back().x;
    chain.escape_nu = nu_of(space, traj.samples.back());
    if (!(std::abs(chain.escape_nu) < opts.nu_tol))
        fail(ErrorKind::SearchFailure, "escape with |nu| above tolerance");
    return chain;
}

SurfaceClass classify(const AmbientSpace& space, const PrescribedH& h, const ClassifySeed& seed,
                      const ClassifierOptions& opts) {
    if (std::holds_alternative<AxisSeed>(seed)) return shoot_sphere(space, h, opts);
    if (std::holds_alternative<EquilibriumSeed>(seed)) return build_cylinder(space, h);
    if (std::holds_alternative<S2xRTorusSeed>(seed)) return s2r_torus(space, h, opts);
    if (std::holds_alternative<BergerPoleSeed>(seed)) return berger_pole_orbit(space, h, opts);

    const auto y0 = std::get<Y0Seed>(seed);
    if (!space.in_domain(y0.x0)) fail(ErrorKind::Seed, "seed outside the model domain");
    const double e0 = equilibrium(space, h, Eps::Plus)->x;
    const double r0 = shoot_sphere(space, h, opts).r0;
    auto near = [&](double a, double b) { return std::abs(a - b) <= opts.separatrix_tol * b; };

    if (y0.eps == Eps::Plus) {
        if (near(y0.x0, e0) || near(y0.x0, r0)) {
            std::ostringstream msg;
            msg << "seed x0=" << y0.x0 << " sits on a separatrix value (e0=" << e0 << ", r0=" << r0 << ")";
            fail(ErrorKind::AmbiguousSeed, msg.str());
        }
        if (y0.x0 < e0) return trace_unduloid(space, h, y0.x0, opts);
        if (y0.x0 > r0) return trace_nodoid(space, h, y0.x0, opts);
        // between the equilibrium and the sphere: same closed orbit, read off its neck
        StopSpec stop;
        stop.y0_crossings = 1;
        stop.omega_any = 1;
        auto traj = integrate(space, h, {0.0, y0.x0, 0.0, 0.5 * kPi}, stop, resolved(space, opts.budget),
                              opts.integrator);
        if (traj.stop != StopReason::Y0Count) fail(ErrorKind::Classification, "no neck found: " + describe(traj));
        return trace_unduloid(space, h, traj.events.back().state.x, opts);
    }

    if (auto e1 = equilibrium(space, h, Eps::Minus); e1 && near(y0.x0, e1->x))
        fail(ErrorKind::AmbiguousSeed, "seed sits on the lower equilibrium");
    StopSpec stop;
    stop.y0_crossings = 1;
    auto traj = integrate(space, h, {0.0, y0.x0, 0.0, 1.5 * kPi}, stop, resolved(space, opts.budget), opts.integrator);
    if (traj.stop != StopReason::Y0Count)
        fail(ErrorKind::Classification, "lower-plane orbit did not return to y = 0: " + describe(traj));
    const bool through_boundary = std::any_of(traj.events.begin(), traj.events.end(), [](const Event& e) {
        return e.kind == EventKind::OmegaPlus || e.kind == EventKind::OmegaMinus;
    });
    if (through_boundary) {
        const double outer = traj.events.back().state.x;
        if (near(outer, r0)) fail(ErrorKind::AmbiguousSeed, "orbit continues along the sphere separatrix");
        return trace_nodoid(space, h, outer, opts);
    }
    return trace_closed_orbit(space, h, y0.x0, Eps::Minus, opts);
}

Profile sphere_profile(const Sphere& sphere, int points) {
    Profile prof;
    prof.axis_ends = true;
    const double s0 = sphere.half.s_end();
    const double z0 = sphere.half.samples.back().z;
    const int half_pts = std::max(points / 2, 2);
    prof.points.push_back({0.0, 0.0, 0.0, 0.0});
    for (double s : uniform(sphere.half.s_begin(), s0, half_pts)) prof.points.push_back(sphere.half.at(s));
    const auto first = prof.points;
    for (auto it = first.rbegin() + 1; it != first.rend(); ++it) {
        prof.points.push_back({2.0 * s0 - it->s, it->x, 2.0 * z0 - it->z, kPi - it->theta});
    }
    return prof;
}

Profile nodoid_profile(const Nodoid& n, int points) {
    Profile prof;
    prof.closed_loop = n.closes;
    const double a = n.backward.s_begin();
    const double b = n.forward.s_end();
    for (double s : uniform(a, b, points)) {
        prof.points.push_back(s < 0.0 ? n.backward.at(s) : n.forward.at(s));
    }
    if (n.closes) prof.points.pop_back();
    return prof;
}

Profile trajectory_profile(const Trajectory& traj, int points) {
    Profile prof;
    for (double s : uniform(traj.s_begin(), traj.s_end(), points)) prof.points.push_back(traj.at(s));
    const auto& f = prof.points.front();
    const auto& l = prof.points.back();
    if (std::abs(f.x - l.x) + std::abs(f.z - l.z) < 1e-6) {
        prof.closed_loop = true;
        prof.points.pop_back();
    }
    return prof;
}

}  // namespace hsurf
