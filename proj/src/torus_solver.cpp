#include "hsurf/torus_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hsurf {

namespace {

constexpr double kPi = std::numbers::pi;

// State (x, z, s) as functions of theta.
struct ThetaRhs {
    const AmbientSpace* space;
    const PrescribedH* h;

    double denominator(double x, double theta) const {
        const auto fr = frame(*space, x, theta);
        return 8.0 * h->eval(std::clamp(fr.nu, -1.0, 1.0)) - fr.f * std::sin(theta);
    }

    ode::Vec<3> operator()(double theta, const ode::Vec<3>& y) const {
        const double x = y[0];
        if (!(x > 0.0) || !space->in_domain(x)) return {NAN, NAN, NAN};
        const auto fr = frame(*space, x, theta);
        const double den = 8.0 * h->eval(std::clamp(fr.nu, -1.0, 1.0)) - fr.f * std::sin(theta);
        if (!(den > 0.0)) return {NAN, NAN, NAN};
        return {std::cos(theta) * fr.p / den, 4.0 * std::sin(theta) * fr.w / den, fr.p * fr.w / den};
    }
};

struct ArcPiece {
    std::vector<ode::DenseSegment<3>> segments;
    ode::Vec<3> end;
};

ArcPiece integrate_theta(const AmbientSpace& space, const PrescribedH& h, double x1, double target,
                         const GapOptions& opts) {
    ThetaRhs rhs{&space, &h};
    if (!(rhs.denominator(x1, kPi) > 0.0)) fail(ErrorKind::ArcDegeneracy, "theta' <= 0 at the boundary contact");
    ode::StepControl ctl;
    ctl.rtol = opts.rtol;
    ctl.atol = opts.atol;
    ode::DormandPrince<3, ThetaRhs> dp(rhs, ctl);
    const int dir = target > kPi ? 1 : -1;
    dp.reset(kPi, {x1, 0.0, 0.0}, dir);
    ArcPiece piece;
    for (long steps = 0; steps < 1'000'000; ++steps) {
        const double remaining = std::abs(target - dp.t());
        if (remaining <= 1e-15) break;
        if (!dp.step(remaining)) {
            std::ostringstream msg;
            msg << "theta' <= 0 or the arc left the domain near theta=" << dp.t() << " (x=" << dp.y()[0] << ")";
            fail(ErrorKind::ArcDegeneracy, msg.str());
        }
        piece.segments.push_back(dp.segment());
        if (!(rhs.denominator(dp.y()[0], dp.t()) > 0.0))
            fail(ErrorKind::ArcDegeneracy, "theta' <= 0 on the arc");
    }
    piece.end = dp.y();
    return piece;
}

}  // namespace

TorusGapResult torus_gap(const AmbientSpace& space, const PrescribedH& h, double x1, const GapOptions& opts) {
    if (!(space.kappa() <= 0.0 && space.tau() > 0.0))
        fail(ErrorKind::Unsupported, "torus gap is defined for kappa <= 0 < tau");
    if (!space.in_domain(x1)) fail(ErrorKind::Domain, "x1 outside the model domain");
    const auto up = integrate_theta(space, h, x1, 0.5 * kPi, opts);
    const auto down = integrate_theta(space, h, x1, 1.5 * kPi, opts);

    TorusGapResult r{};
    r.I2 = -up.end[1];
    r.I1 = -down.end[1];
    r.gap = r.I2 - r.I1;
    r.x_upper = up.end[0];
    r.x_lower = down.end[0];

    auto nu_at = [&](const ode::DenseSegment<3>& seg, double th) {
        return std::cos(th) / std::sqrt(1.0 + space.tau() * space.tau() * std::pow(seg.eval(th)[0], 2));
    };
    r.nu_min = INFINITY;
    std::size_t best_seg = 0;
    double best_th = kPi;
    for (std::size_t i = 0; i < down.segments.size(); ++i) {
        const auto& seg = down.segments[i];
        for (int k = 0; k <= 16; ++k) {
            const double th = seg.t0 + seg.h * k / 16.0;
            const double v = nu_at(seg, th);
            if (v < r.nu_min) {
                r.nu_min = v;
                best_seg = i;
                best_th = th;
            }
        }
    }
    // golden-section refinement around the sampled minimum
    const auto& seg = down.segments[best_seg];
    double a = std::max(kPi, best_th - std::abs(seg.h) / 16.0);
    double b = std::min(1.5 * kPi, best_th + std::abs(seg.h) / 16.0);
    auto eval = [&](double th) {
        for (const auto& sg : down.segments)
            if (th >= std::min(sg.t0, sg.t1()) && th <= std::max(sg.t0, sg.t1())) return nu_at(sg, th);
        return nu_at(seg, th);
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    const double th = 0.5 * (a + b);
    const double v = eval(th);
    if (v < r.nu_min) {
        r.nu_min = v;
        best_th = th;
    }
    r.theta_hat = best_th;
    return r;
}

bool nonexistence_check(const PrescribedH& h, int samples) {
    samples = std::max(samples, 2);
    for (int k = 1; k <= samples; ++k) {
        const double y = -static_cast<double>(k) / (samples + 1);
        if (h.eval_dh(y) > 1e-12) return false;
    }
    return true;
}

TorusSearchResult find_torus(const AmbientSpace& space, double H0, double x1, double delta,
                             const TorusSearchOptions& opts) {
    if (!(space.kappa() <= 0.0 && space.tau() > 0.0))
        fail(ErrorKind::Unsupported, "torus search runs for kappa <= 0 < tau; other spaces go through classify");
    const double nu0 = -1.0 / std::sqrt(1.0 + space.tau() * space.tau() * x1 * x1);
    const auto reference = torus_gap(space, PrescribedH::constant(H0), x1, opts.gap);
    if (!(reference.nu_min < nu0 - delta)) {
        std::ostringstream msg;
        msg << "delta condition fails: reference nodoid reaches nu_min=" << reference.nu_min
            << " but nu0-delta=" << nu0 - delta << " (nu0=" << nu0 << ", delta=" << delta << ")";
        fail(ErrorKind::Spec, msg.str());
    }
    auto h_of = [&](double lambda) { return PrescribedH::step_family({H0, lambda, nu0, delta}); };
    auto gap_of = [&](double lambda) { return torus_gap(space, h_of(lambda), x1, opts.gap).gap; };

    TorusSearchResult res{};
    res.nu0 = nu0;
    res.delta = delta;
    res.reference_nu_min = reference.nu_min;
    res.schedule.push_back({H0, reference.gap});
    for (double lambda = 2.0 * H0; lambda <= opts.lambda_max_factor * H0; lambda *= 2.0) {
        res.schedule.push_back({lambda, gap_of(lambda)});
    }
    for (std::size_t i = 1; i < res.schedule.size(); ++i) {
        if ((res.schedule[i - 1].gap > 0.0) != (res.schedule[i].gap > 0.0))
            res.brackets.emplace_back(res.schedule[i - 1].lambda, res.schedule[i].lambda);
    }
    if (res.brackets.empty()) {
        std::ostringstream msg;
        msg << "gap keeps its sign up to lambda=" << res.schedule.back().lambda
            << " (last gap=" << res.schedule.back().gap << ")";
        fail(ErrorKind::NoCrossing, msg.str());
    }

    auto [lo, hi] = res.brackets.front();
    double g_lo = gap_of(lo);
    double lambda0 = lo;
    double g0 = g_lo;
    for (int it = 0; it < opts.max_bisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap_of(mid);
        res.bisection.push_back({mid, g});
        lambda0 = mid;
        g0 = g;
        if (std::abs(g) < opts.gap_tol || mid == lo || mid == hi) break;
        if ((g > 0.0) == (g_lo > 0.0)) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    if (!(std::abs(g0) < opts.gap_tol)) {
        std::ostringstream msg;
        msg << "bisection stalled at lambda=" << lambda0 << " with gap=" << g0
            << " (gap jumps across zero inside the bracket)";
        fail(ErrorKind::SearchFailure, msg.str());
    }

    const auto h0 = h_of(lambda0);
    const auto arc = torus_gap(space, h0, x1, opts.gap);
    res.lambda0 = lambda0;
    res.gap_at_lambda0 = arc.gap;
    res.I1 = arc.I1;
    res.I2 = arc.I2;
    res.nodoid = trace_nodoid(space, h0, arc.x_upper, opts.classifier);
    if (!res.nodoid.closes) {
        std::ostringstream msg;
        msg << "profile at lambda0=" << lambda0 << " does not close: |z2+z0|=" << res.nodoid.closure_residual;
        fail(ErrorKind::Closure, msg.str());
    }
    return res;
}

nlohmann::ordered_json TorusSearchResult::to_json(const std::optional<std::string>& profile_ref) const {
    nlohmann::ordered_json j;
    j["lambda0"] = lambda0;
    j["gap_at_lambda0"] = gap_at_lambda0;
    j["I1"] = I1;
    j["I2"] = I2;
    j["nu0"] = nu0;
    j["delta"] = delta;
    j["reference_nu_min"] = reference_nu_min;
    auto sched = nlohmann::ordered_json::array();
    for (const auto& s : schedule) sched.push_back({{"lambda", s.lambda}, {"gap", s.gap}});
    j["schedule"] = sched;
    auto br = nlohmann::ordered_json::array();
    for (const auto& [a, b] : brackets) br.push_back({a, b});
    j["brackets"] = br;
    j["bisection_steps"] = bisection.size();
    j["closes"] = nodoid.closes;
    j["closure_residual"] = nodoid.closure_residual;
    j["outer_x0"] = nodoid.outer;
    j["omega_x1"] = nodoid.omega_x;
    j["inner_x2"] = nodoid.inner;
    if (profile_ref) j["profile_ref"] = *profile_ref;
    else j["profile_ref"] = nullptr;
    return j;
}

}  // namespace hsurf
