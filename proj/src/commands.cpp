#include "hsurf/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "hsurf/export.hpp"
#include "hsurf/torus_solver.hpp"

namespace hsurf {

namespace {

constexpr double kPi = std::numbers::pi;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot open \"" + path + "\" for writing");
    f << content;
    if (!f) fail(ErrorKind::Io, "write to \"" + path + "\" failed");
}

void emit_json(const CommandIo& io, const nlohmann::ordered_json& j) {
    const std::string text = j.dump(2) + "\n";
    if (io.out) write_file(*io.out, text);
    else *io.stdout_stream << text;
}

const std::string& require_out(const CommandIo& io, const char* cmd) {
    if (!io.out) fail(ErrorKind::Parse, std::string(cmd) + " needs --out");
    return *io.out;
}

// Guard that turns library errors into exit codes.
template <class F>
int guarded(const CommandIo& io, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        *io.stderr_stream << e.what() << "\n";
        return e.kind() == ErrorKind::Parse ? kExitUsage : kExitFailure;
    } catch (const nlohmann::json::exception& e) {
        *io.stderr_stream << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
}

struct TracedProfile {
    std::vector<AngularState> samples;
    std::vector<Event> events;
    Profile profile;
    SurfaceClass surface;
};

std::vector<AngularState> join_nodoid(const Nodoid& n, std::vector<Event>& events) {
    std::vector<AngularState> out = n.backward.samples;
    events = n.backward.events;
    for (const auto& s : n.forward.samples)
        if (s.s > out.back().s) out.push_back(s);
    events.insert(events.end(), n.forward.events.begin(), n.forward.events.end());
    return out;
}

TracedProfile trace_seed(const RunConfig& cfg) {
    const auto space = cfg.space();
    const auto h = cfg.h();
    auto opts = cfg.classifier_options();
    const auto kind = cfg.seed ? cfg.seed->at("kind").get<std::string>() : std::string("axis");
    const int pts = cfg.profile_points;

    if (kind == "rotational-torus") {
        if (!cfg.torus) fail(ErrorKind::Parse, "rotational-torus seed needs a torus section");
        TorusSearchOptions topts;
        topts.classifier = opts;
        auto res = find_torus(space, cfg.torus->H0, cfg.torus->x1, cfg.torus->delta, topts);
        TracedProfile tp{{}, {}, nodoid_profile(res.nodoid, pts), TorusRotational{res.lambda0, res.nodoid}};
        tp.samples = join_nodoid(res.nodoid, tp.events);
        return tp;
    }
    if (kind == "axis") {
        auto sphere = shoot_sphere(space, h, opts);
        StopSpec stop;
        auto full = integrate(space, h, axis_start(space, h, 1, opts.s_seed), stop,
                              Budget{opts.budget.max_arc, opts.budget.x_max}, opts.integrator);
        TracedProfile tp{full.samples, full.events, sphere_profile(sphere, pts), sphere};
        return tp;
    }
    if (kind == "equilibrium") {
        const auto cyl = build_cylinder(space, h);
        StopSpec stop;
        Budget b{cfg.profile_arc, opts.budget.x_max};
        auto traj = integrate(space, h, {0.0, cyl.radius, 0.0, 0.5 * kPi}, stop, b, opts.integrator);
        Profile prof;
        for (int i = 0; i < pts; ++i) {
            const double z = cfg.profile_arc * i / (pts - 1);
            prof.points.push_back({z, cyl.radius, z, 0.5 * kPi});
        }
        return {traj.samples, traj.events, prof, cyl};
    }
    auto surface = classify(space, h, cfg.classify_seed(), opts);
    TracedProfile tp{{}, {}, {}, surface};
    if (auto* u = std::get_if<Unduloid>(&surface)) {
        tp.samples = u->orbit.samples;
        tp.events = u->orbit.events;
        tp.profile = trajectory_profile(u->orbit, pts);
        tp.profile.closed_loop = false;
    } else if (auto* n = std::get_if<Nodoid>(&surface)) {
        tp.samples = join_nodoid(*n, tp.events);
        tp.profile = nodoid_profile(*n, pts);
    } else if (auto* t = std::get_if<TorusS2xR>(&surface)) {
        tp.samples = t->profile.samples;
        tp.events = t->profile.events;
        tp.profile = trajectory_profile(t->profile, pts);
    } else if (auto* s = std::get_if<Sphere>(&surface)) {
        tp.samples = s->half.samples;
        tp.events = s->half.events;
        tp.profile = sphere_profile(*s, pts);
    } else {
        fail(ErrorKind::Classification, tag_of(surface) + " has no finite profile");
    }
    return tp;
}

std::string csv_text(const AmbientSpace& space, const PrescribedH& h, const std::vector<AngularState>& samples) {
    std::ostringstream csv;
    write_trajectory_csv(csv, space, h, samples);
    return csv.str();
}

}  // namespace

int cmd_validate(const RunConfig& cfg, const CommandIo& io) {
    return guarded(io, [&] {
        const auto rep = validate_c1(cfg.h(), cfg.space());
        emit_json(io, rep.to_json());
        return rep.ok ? kExitOk : kExitFailure;
    });
}

int cmd_classify(const RunConfig& cfg, const CommandIo& io) {
    return guarded(io, [&] {
        const auto space = cfg.space();
        const auto h = cfg.h();
        if (!validate_c1(h, space).ok) fail(ErrorKind::Domain, "h is not admissible for this space");
        const auto surface = classify(space, h, cfg.classify_seed(), cfg.classifier_options());
        std::optional<std::string> ref;
        if (io.csv) {
            const Trajectory* main = nullptr;
            std::vector<AngularState> joined;
            if (auto* s = std::get_if<Sphere>(&surface)) main = &s->half;
            else if (auto* u = std::get_if<Unduloid>(&surface)) main = &u->orbit;
            else if (auto* t = std::get_if<TorusS2xR>(&surface)) main = &t->profile;
            if (auto* n = std::get_if<Nodoid>(&surface)) {
                std::vector<Event> ev;
                joined = join_nodoid(*n, ev);
            } else if (main) {
                joined = main->samples;
            }
            write_file(*io.csv, csv_text(space, h, joined));
            ref = *io.csv;
        }
        emit_json(io, to_json(surface, ref));
        return kExitOk;
    });
}

int cmd_profile(const RunConfig& cfg, const CommandIo& io) {
    return guarded(io, [&] {
        const auto& out = require_out(io, "profile");
        const auto tp = trace_seed(cfg);
        write_file(out, csv_text(cfg.space(), cfg.h(), tp.samples));
        write_file(out + ".events.json", events_json(tp.events).dump(2) + "\n");
        return kExitOk;
    });
}

int cmd_mesh(const RunConfig& cfg, const CommandIo& io) {
    return guarded(io, [&] {
        const auto& out = require_out(io, "mesh");
        const auto space = cfg.space();
        Profile prof;
        if (cfg.profile_csv) {
            std::ifstream in(*cfg.profile_csv);
            if (!in) fail(ErrorKind::Io, "cannot read \"" + *cfg.profile_csv + "\"");
            prof.points = read_trajectory_csv(in);
            if (prof.points.size() < 2) fail(ErrorKind::Domain, "profile CSV has fewer than two rows");
            const auto& f = prof.points.front();
            const auto& l = prof.points.back();
            if (std::abs(f.x - l.x) + std::abs(f.z - l.z) < 1e-6) {
                prof.closed_loop = true;
                prof.points.pop_back();
            }
        } else {
            prof = trace_seed(cfg).profile;
        }
        MeshTopology topo = MeshTopology::Auto;
        if (cfg.mesh_topology == "sphere") topo = MeshTopology::Sphere;
        else if (cfg.mesh_topology == "torus") topo = MeshTopology::Torus;
        else if (cfg.mesh_topology == "tube") topo = MeshTopology::Tube;
        const auto mesh = revolve(prof, cfg.angular_res, topo);
        std::optional<AmbientSpace> berger;
        if (space.vertical_period()) berger = space;
        std::ostringstream obj;
        write_obj(obj, mesh, berger);
        write_file(out, obj.str());
        return kExitOk;
    });
}

int cmd_phase_plot(const RunConfig& cfg, const CommandIo& io) {
    return guarded(io, [&] {
        const auto& out = require_out(io, "phase-plot");
        const auto space = cfg.space();
        const auto h = cfg.h();
        const Eps eps = cfg.plot_eps > 0 ? Eps::Plus : Eps::Minus;
        PhasePlotInput input{space, h, eps, cfg.plot_x_max, {}};
        auto opts = cfg.classifier_options();
        for (const auto& o : cfg.orbits) {
            StopSpec stop;
            Budget b{o.arc, opts.budget.x_max};
            const double th = o.eps == Eps::Plus ? 0.5 * kPi : 1.5 * kPi;
            auto traj = integrate(space, h, {0.0, o.x0, 0.0, th}, stop, b, opts.integrator);
            input.orbits.push_back(project_orbit(space, traj, eps));
        }
        write_file(out, phase_plot_svg(input));
        return kExitOk;
    });
}

int cmd_torus_search(const RunConfig& cfg, const CommandIo& io) {
    return guarded(io, [&] {
        const auto space = cfg.space();
        if (space.kappa() > 0.0 || space.tau() == 0.0)
            fail(ErrorKind::Unsupported, "torus search covers kappa <= 0 < tau; use classify for other spaces");
        const auto h = cfg.h();
        if (nonexistence_check(h)) {
            nlohmann::ordered_json j;
            j["refused"] = true;
            j["nonexistence_check"] = true;
            j["reason"] = "h is non-increasing on [-1, 0]; no rotational torus exists";
            emit_json(io, j);
            return kExitFailure;
        }
        if (!cfg.torus) fail(ErrorKind::Parse, "torus-search needs a torus section");
        TorusSearchOptions topts;
        topts.classifier = cfg.classifier_options();
        const auto res = find_torus(space, cfg.torus->H0, cfg.torus->x1, cfg.torus->delta, topts);
        std::optional<std::string> ref;
        if (io.csv) {
            std::vector<Event> ev;
            const auto hl = PrescribedH::step_family({cfg.torus->H0, res.lambda0, res.nu0, res.delta});
            write_file(*io.csv, csv_text(space, hl, join_nodoid(res.nodoid, ev)));
            ref = *io.csv;
        }
        auto j = res.to_json(ref);
        j["nonexistence_check"] = false;
        emit_json(io, j);
        return kExitOk;
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rotational surfaces with prescribed mean curvature in homogeneous 3-spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::optional<std::string> out_path, csv_path;
    std::optional<double> rtol, atol, x_max, arc_budget;
    std::optional<int> angular_res;
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_path, "primary output path");
    app.add_option("--rtol", rtol, "relative tolerance");
    app.add_option("--atol", atol, "absolute tolerance");
    app.add_option("--x-max", x_max, "largest x before a trajectory counts as escaping");
    app.add_option("--arc-budget", arc_budget, "arc length budget");
    app.add_option("--angular-res", angular_res, "mesh angular resolution");

    auto* validate = app.add_subcommand("validate", "check that h is admissible for the space");
    auto* classify_cmd = app.add_subcommand("classify", "classify the surface generated by a seed");
    auto* plot = app.add_subcommand("phase-plot", "write an SVG phase portrait");
    auto* profile = app.add_subcommand("profile", "write the profile trajectory as CSV");
    auto* mesh = app.add_subcommand("mesh", "write a revolved OBJ mesh");
    auto* torus = app.add_subcommand("torus-search", "search the step family for a rotational torus");
    for (auto* sub : {classify_cmd, torus}) sub->add_option("--csv", csv_path, "trajectory CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        if (rtol) cfg.rtol = *rtol;
        if (atol) cfg.atol = *atol;
        if (x_max) cfg.x_max = *x_max;
        if (arc_budget) cfg.arc_budget = *arc_budget;
        if (angular_res) cfg.angular_res = *angular_res;
        if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0) || !(cfg.arc_budget > 0.0) || cfg.angular_res < 3)
            fail(ErrorKind::Parse, "tolerances and budgets must be positive");
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    const CommandIo io{out_path, csv_path, &out, &err};
    if (*validate) return cmd_validate(cfg, io);
    if (*classify_cmd) return cmd_classify(cfg, io);
    if (*plot) return cmd_phase_plot(cfg, io);
    if (*profile) return cmd_profile(cfg, io);
    if (*mesh) return cmd_mesh(cfg, io);
    return cmd_torus_search(cfg, io);
}

}  // namespace hsurf
