// Acceptance gate: one PASS/FAIL line per criterion, detail lines indented below it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "hsurf/torus_solver.hpp"
#include "oracles.hpp"

using namespace hsurf;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back("violated: " + what);
        }
    }
    template <class... A>
    void note(const char* fmt, A... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        details.emplace_back(buf);
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.details.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, title, secs);
    for (const auto& d : out.details) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
}

const PrescribedH& one() {
    static const PrescribedH h = PrescribedH::constant(1.0);
    return h;
}

std::vector<PrescribedH> both_h() { return {one(), corpus::table_h()}; }

double numerator_scale(const AmbientSpace& sp, const PrescribedH& h, double x, double y) {
    const double k = sp.kappa(), t2 = sp.tau() * sp.tau();
    return 4.0 + std::abs(k) * x * x + y * y * (4.0 + x * x * std::abs(k - 8 * t2)) + 8.0 * x * h.eval(y);
}

void euclidean_oracle(Outcome& o) {
    double worst_r = 0, worst_h = 0;
    for (double H0 : {0.5, 1.0, 2.0}) {
        const auto s = shoot_sphere(AmbientSpace(0, 0, true), PrescribedH::constant(H0));
        worst_r = std::max(worst_r, std::abs(s.r0 - 1 / H0));
        worst_h = std::max(worst_h, std::abs(s.height - 2 / H0));
    }
    o.require(worst_r < 1e-6 && worst_h < 1e-6, "radius and height within 1e-6");
    o.note("max |r0 - 1/H0| = %.3e, max |height - 2/H0| = %.3e", worst_r, worst_h);
}

void nullcline_residual(Outcome& o) {
    double worst = 0;
    int points = 0;
    for (const auto& sc : corpus::spaces()) {
        const AmbientSpace sp(sc.kappa, sc.tau);
        for (const auto& h : both_h()) {
            for (Eps eps : {Eps::Plus, Eps::Minus}) {
                std::vector<std::pair<double, double>> pts;
                for (int i = 1; i < 4000; ++i) {
                    const double y = -1.0 + 2.0 * i / 4000;
                    if (auto g = gamma_curve(sp, h, eps, y)) pts.emplace_back(*g, y);
                }
                const std::size_t take = std::min<std::size_t>(200, pts.size());
                for (std::size_t k = 0; k < take; ++k) {
                    const auto [x, y] = pts[k * pts.size() / take];
                    const double n = phase_numerator(sp, h, eps, x, y);
                    worst = std::max(worst, std::abs(n) / numerator_scale(sp, h, x, y));
                    ++points;
                }
            }
        }
    }
    o.require(worst <= 1e-9, "relative residual <= 1e-9");
    o.note("%d nullcline points over 5 spaces x 2 h x 2 signs; max relative residual %.3e", points, worst);
}

void claims_suite(Outcome& o) {
    std::vector<double> ys;
    for (int i = 0; i < 500; ++i) ys.push_back(-1.0 + 2.0 * (i + 0.5) / 500);
    int hi = 0;
    for (const auto& h : both_h()) {
        const char* hname = hi++ == 0 ? "h=1" : "table";
        // Claim 1 and Claim 3: kappa < 0.
        for (const auto& sc : {corpus::SpaceCase{-1, 0, "H2xR"}, corpus::SpaceCase{-1, 1, "SL2"}}) {
            const AmbientSpace sp(sc.kappa, sc.tau);
            const double wall = *sp.wall_radius();
            double m1 = INFINITY;
            for (double y : ys)
                if (auto g = raw_gamma_value(sp, h, Eps::Plus, y)) m1 = std::min(m1, (wall - *g) / wall);
            o.require(m1 >= 1e-10, std::string("claim 1 in ") + sc.name);
            const double m3 = (*raw_gamma_value(sp, h, Eps::Minus, 0.0) - wall) / wall;
            o.require(m3 >= 1e-10, std::string("claim 3 in ") + sc.name);
            o.note("%s %s: claim 1 margin %.4f, claim 3 margin %.4f", sc.name, hname, m1, m3);
        }
        // Claim 5: kappa < 0, tau = 0.
        {
            const AmbientSpace sp(-1, 0);
            int present = 0;
            double m5 = INFINITY;
            for (double y : ys) {
                present += gamma_curve(sp, h, Eps::Minus, y).has_value();
                if (auto r = raw_gamma_value(sp, h, Eps::Minus, y)) m5 = std::min(m5, (*r - 2.0) / 2.0);
            }
            o.require(present == 0, "claim 5: lower nullcline absent");
            o.note("H2xR %s: claim 5 lower nullcline present at %d/500 y, formula stays outside by %.4f", hname,
                   present, m5);
        }
        // Claim 6: kappa > 0, tau = 0.
        {
            const AmbientSpace sp(1, 0);
            double m6 = INFINITY;
            int defined = 0;
            for (double y : ys)
                if (auto g = gamma_curve(sp, h, Eps::Minus, y)) {
                    m6 = std::min(m6, (*g - 2.0) / 2.0);
                    ++defined;
                }
            o.require(defined == 500 && m6 >= 1e-10, "claim 6 in S2xR");
            o.note("S2xR %s: claim 6 margin %.4f over %d points", hname, m6, defined);
        }
        // Claim 4: kappa > 0, tau > 0.
        {
            const AmbientSpace sp(4, 0.5);
            const double r = 2.0 / std::sqrt(4.0);
            const double m4 = (*gamma_curve(sp, h, Eps::Minus, 0.0) - r) / r;
            const double tip = std::max(*gamma_curve(sp, h, Eps::Minus, 1 - 1e-8), *gamma_curve(sp, h, Eps::Minus, -1 + 1e-8));
            o.require(m4 >= 1e-10, "claim 4 centre");
            o.require(tip < 1e-3, "claim 4 ends");
            o.note("Berger %s: claim 4 margin %.4f at y=0, nullcline at |y|=1-1e-8 is %.3e", hname, m4, tip);
        }
    }
}

void conservation(Outcome& o) {
    auto entries = corpus::trajectories();
    for (const auto& [k, x1] : {std::pair{0.0, 0.9}, std::pair{-1.0, 0.7}}) {
        const AmbientSpace sp(k, 1);
        const auto r = find_torus(sp, 1.0, x1, 1e-4);
        const auto hl = PrescribedH::step_family({1.0, r.lambda0, r.nu0, r.delta});
        entries.push_back({"torus-forward", sp, hl, r.nodoid.forward});
        entries.push_back({"torus-backward", sp, hl, r.nodoid.backward});
    }
    double arc = 0, dense = 0, curv = 0;
    std::size_t samples = 0;
    for (const auto& e : entries) {
        for (const auto& st : e.traj.samples) arc = std::max(arc, std::abs(arc_length_defect(e.space, e.h, st)));
        samples += e.traj.samples.size();
        for (const auto& seg : e.traj.segments)
            for (int i = 1; i < 4; ++i) {
                const double s = seg.t0 + seg.h * i / 4;
                const auto y = seg.eval(s);
                const auto d = seg.derivative(s);
                const auto g = e.space.metric_coeffs(y[0]);
                dense = std::max(dense, std::abs(g[0] * d[0] * d[0] + g[1] * d[1] * d[1] - 1.0));
            }
        curv = std::max(curv, curvature_residual(e.space, e.h, e.traj));
    }
    o.require(arc <= 1e-9, "arc-length identity <= 1e-9");
    o.require(curv < 1e-7, "curvature residual < 1e-7");
    o.note("%zu trajectories, %zu samples; max arc-length defect %.3e, max curvature residual %.3e", entries.size(),
           samples, arc, curv);
    o.note("between samples, with derivatives of the interpolant: max arc-length defect %.3e", dense);
}

void symmetry(Outcome& o) {
    oracle::Gen gen(101);
    double worst = 0;
    int orbits = 0;
    for (const auto& sc : corpus::spaces()) {
        const AmbientSpace sp(sc.kappa, sc.tau);
        for (const auto& h : both_h()) {
            const double e0 = equilibrium(sp, h, Eps::Plus)->x;
            const double r0 = shoot_sphere(sp, h).r0;
            std::vector<std::pair<double, double>> seeds{{0.5 * e0, pi / 2}, {1.4 * r0, pi / 2}};
            const double top = sp.wall_radius() ? 0.8 * *sp.wall_radius() : 3.0;
            for (int i = 0; i < 3; ++i) seeds.emplace_back(gen.uniform(0.2, top), gen.uniform(0, 2 * pi));
            for (const auto& [x0, th0] : seeds) {
                Budget b;
                b.max_arc = 6.0;
                IntegratorOptions back;
                back.direction = -1;
                const auto f = integrate(sp, h, {0, x0, 0, th0}, StopSpec{}, b);
                const auto r = integrate(sp, h, {0, x0, 0, pi - th0}, StopSpec{}, b, back);
                const double reach = std::min(f.s_end(), -r.s_begin());
                for (int i = 0; i <= 300; ++i) {
                    const double s = reach * i / 300;
                    const auto a = f.at(s), c = r.at(-s);
                    worst = std::max({worst, std::abs(a.x - c.x), std::abs(a.z + c.z),
                                      std::abs(nu_of(sp, a) + nu_of(sp, c))});
                }
                ++orbits;
            }
        }
    }
    o.require(worst <= 1e-8, "reflection mismatch <= 1e-8");
    o.note("%d orbits over 5 spaces x 2 h; max |forward - reflected backward| in (x, z, nu) = %.3e", orbits, worst);
}

void omega_signs(Outcome& o) {
    int seeds = 0, plus = 0, minus = 0;
    double min_plus = INFINITY, max_minus = -INFINITY;
    for (const auto& sc : corpus::spaces()) {
        const AmbientSpace sp(sc.kappa, sc.tau);
        for (const auto& h : both_h()) {
            const double r0 = shoot_sphere(sp, h).r0;
            for (double x0 : corpus::nodoid_seeds(sp, r0)) {
                const auto n = trace_nodoid(sp, h, x0);
                StopSpec stop;
                stop.omega_any = 6;
                const auto longer = integrate(sp, h, {0, x0, 0, pi / 2}, stop);
                ++seeds;
                for (const auto* t : {&n.forward, &n.backward, &longer})
                    for (const auto& ev : t->events) {
                        const double zpp = z_second_derivative(sp, h, ev.state.x, ev.state.theta);
                        if (ev.kind == EventKind::OmegaPlus) {
                            ++plus;
                            min_plus = std::min(min_plus, zpp);
                        } else if (ev.kind == EventKind::OmegaMinus) {
                            ++minus;
                            max_minus = std::max(max_minus, zpp);
                        }
                    }
            }
        }
    }
    o.require(seeds >= 20, "at least 20 nodoid seeds");
    o.require(min_plus > 0 && max_minus < 0, "z'' signs at boundary contacts");
    o.note("%d nodoid seeds; %d upper contacts with min z'' = %.4f; %d lower contacts with max z'' = %.4f", seeds,
           plus, min_plus, minus, max_minus);
}

void nonexistence(Outcome& o) {
    oracle::Gen gen(211);
    double min_gap = INFINITY, worst_diff = 0;
    int cases = 0;
    for (const auto& [k, name] : {std::pair{0.0, "Nil"}, std::pair{-1.0, "SL2"}}) {
        const AmbientSpace sp(k, 1);
        std::vector<PrescribedH> hs{one()};
        while (hs.size() < 11) {
            auto h = PrescribedH::table(gen.monotone_table(0.7, 1.5, 1.0));
            if (validate_c1(h, sp).ok && nonexistence_check(h)) hs.push_back(h);
        }
        double local_min = INFINITY;
        for (const auto& h : hs) {
            for (double x1 : {0.3, 0.6, 0.9, 1.2}) {
                const auto g = torus_gap(sp, h, x1);
                StopSpec stop;
                stop.y0_crossings = 1;
                IntegratorOptions opt;
                opt.rtol = 1e-12;
                opt.atol = 1e-14;
                const auto t = integrate(sp, h, {0, g.x_upper, 0, pi / 2}, stop, {}, opt);
                worst_diff = std::max(worst_diff, std::abs(t.samples.back().z - g.gap));
                local_min = std::min(local_min, g.gap);
                ++cases;
            }
        }
        min_gap = std::min(min_gap, local_min);
        o.note("%s: h=1 and 10 random non-increasing tables at x1 in {0.3, 0.6, 0.9, 1.2}; min gap %.4e", name,
               local_min);
    }
    o.require(min_gap > 0, "gap > 0");
    o.require(worst_diff <= 1e-7, "quadrature vs arc-length height change <= 1e-7");
    o.note("%d arcs; max |theta-quadrature gap - arc-length height change| = %.3e", cases, worst_diff);
}

void existence(Outcome& o) {
    for (const auto& [k, name] : {std::pair{0.0, "Nil"}, std::pair{-1.0, "SL2"}}) {
        const AmbientSpace sp(k, 1);
        // Reference nodoid: the depth of its angle-function minimum below nu0 bounds the usable band width.
        double depth = 0, best_x1 = 0;
        for (double x1 = 0.05; x1 < (k < 0 ? 1.6 : 6.0); x1 += 0.01) {
            const auto g = torus_gap(sp, one(), x1);
            const double d = -1.0 / std::sqrt(1 + x1 * x1) - g.nu_min;
            if (d > depth) {
                depth = d;
                best_x1 = x1;
            }
        }
        o.note("%s: deepest reference nodoid at x1 = %.2f reaches %.4f below nu0; requested delta 0.05", name,
               best_x1, depth);
        try {
            const auto r = find_torus(sp, 1.0, best_x1, 0.05);
            const bool ok = std::abs(r.gap_at_lambda0) < 1e-9 && r.nodoid.closes && r.nodoid.closure_residual < 1e-6;
            o.require(ok, std::string(name) + " torus at delta 0.05");
            o.note("%s delta 0.05: lambda0 = %.10f, gap %.2e, closes %d", name, r.lambda0, r.gap_at_lambda0,
                   int(r.nodoid.closes));
        } catch (const Error& e) {
            o.require(false, std::string(name) + " torus at delta 0.05");
            o.note("%s delta 0.05: %s", name, e.what());
        }
        // Without the runtime check the family never changes sign at this band width.
        const double nu0 = -1.0 / std::sqrt(1 + best_x1 * best_x1);
        double min_gap = INFINITY;
        for (double lam = 1.5; lam < 1100; lam *= 2)
            min_gap = std::min(min_gap, torus_gap(sp, PrescribedH::step_family({1.0, lam, nu0, 0.05}), best_x1).gap);
        o.note("%s delta 0.05 with the check bypassed: min gap over lambda in [1.5, 1536] is %.3e (no sign change)",
               name, min_gap);
        for (double delta : {1e-2, 1e-4}) {
            const double x1 = k < 0 ? 0.7 : 0.9;
            try {
                const auto r = find_torus(sp, 1.0, x1, delta);
                o.note("%s delta %.0e, x1 %.1f: lambda0 = %.10f, |gap| = %.2e, closes %d, residual %.2e", name, delta,
                       x1, r.lambda0, std::abs(r.gap_at_lambda0), int(r.nodoid.closes), r.nodoid.closure_residual);
            } catch (const Error& e) {
                o.note("%s delta %.0e, x1 %.1f: %s", name, delta, x1, e.what());
            }
        }
    }
}

void berger(Outcome& o) {
    const AmbientSpace sp(4, 0.5);
    const double em = equilibrium(sp, one(), Eps::Minus)->x;
    const double err = std::abs(em - (std::sqrt(2.0) + 1));
    o.require(err <= 1e-12, "lower equilibrium = sqrt 2 + 1");
    const auto chain = berger_pole_orbit(sp, one());
    const double width = chain.bracket_hi - chain.bracket_lo;
    o.require(width < 1e-8, "bracket width < 1e-8");
    o.require(chain.xi0 < em, "xi0 < lower equilibrium");
    const bool c1 = berger_compactness(pi, sp) == Compactness{Compactness::Kind::EmbeddedTorus, 1, 1};
    const bool c2 = berger_compactness(2 * pi / 3, sp) == Compactness{Compactness::Kind::ImmersedTorus, 2, 3};
    const bool c3 = berger_compactness(pi / std::sqrt(2.0), sp).kind == Compactness::Kind::DenseNoncompact;
    o.require(c1 && c2 && c3, "compactness examples");
    o.note("|e-1 - (sqrt2 + 1)| = %.2e; xi0 = %.12f in [%.12f, %.12f] (width %.2e) after %d steps", err, chain.xi0,
           chain.bracket_lo, chain.bracket_hi, width, chain.bisection_steps);
    o.note("drift %.10f, compactness kind %d (p=%ld, q=%ld); ratio examples %d%d%d", chain.z_drift,
           int(chain.compactness.kind), chain.compactness.p, chain.compactness.q, int(c1), int(c2), int(c3));
}

void unduloid_limits(Outcome& o) {
    const AmbientSpace sp(0, 0, true);
    const double e0 = equilibrium(sp, one(), Eps::Plus)->x;
    const double r0 = shoot_sphere(sp, one()).r0;
    bool mono_e = true, mono_r = true;
    double prev = INFINITY, last_e = 0;
    for (int k = 1; k <= 12; ++k) {
        const double b = trace_unduloid(sp, one(), e0 * (1 - std::ldexp(1.0, -k))).bulge;
        mono_e = mono_e && b < prev;
        prev = last_e = b;
    }
    prev = -INFINITY;
    double last_r = 0;
    for (int k = 1; k <= 12; ++k) {
        const double b = trace_unduloid(sp, one(), e0 * std::ldexp(1.0, -k)).bulge;
        mono_r = mono_r && b > prev;
        prev = last_r = b;
    }
    o.require(mono_e && std::abs(last_e - e0) < 1e-3, "bulge -> e0 monotonically");
    o.require(mono_r && std::abs(last_r - r0) < 1e-3, "bulge -> r0 monotonically");
    o.note("toward e0: monotone %d, final deviation %.3e; toward the axis: monotone %d, final deviation %.3e",
           int(mono_e), std::abs(last_e - e0), int(mono_r), std::abs(last_r - r0));
}

}  // namespace

int main() {
    criterion(1, "Euclidean sphere oracle", euclidean_oracle);
    criterion(2, "Nullcline residual", nullcline_residual);
    criterion(3, "Claims suite", claims_suite);
    criterion(4, "Conservation along the trajectory corpus", conservation);
    criterion(5, "Reflection symmetry", symmetry);
    criterion(6, "Boundary contact signs", omega_signs);
    criterion(7, "Torus non-existence for non-increasing h", nonexistence);
    criterion(8, "Torus existence at delta 0.05", existence);
    criterion(9, "Berger suite", berger);
    criterion(10, "Unduloid family limits", unduloid_limits);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
