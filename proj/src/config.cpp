#include "hsurf/config.hpp"

#include <fstream>
#include <sstream>

#include "hsurf/error.hpp"

namespace hsurf {

namespace {

using ojson = nlohmann::ordered_json;

template <class T>
T get_or(const ojson& obj, const char* key, T fallback) {
    if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
    return obj.at(key).get<T>();
}

std::optional<double> opt_double(const ojson& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return obj.at(key).get<double>();
}

const ojson& section(const ojson& root, const char* key) {
    static const ojson empty = ojson::object();
    if (root.contains(key)) {
        if (!root.at(key).is_object()) fail(ErrorKind::Parse, std::string("\"") + key + "\" must be an object");
        return root.at(key);
    }
    return empty;
}

Eps eps_from(int v) {
    if (v == 1) return Eps::Plus;
    if (v == -1) return Eps::Minus;
    fail(ErrorKind::Parse, "eps must be 1 or -1");
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0)) fail(ErrorKind::Parse, std::string(what) + " must be positive");
}

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

}  // namespace

RunConfig parse_config(const std::string& text) {
    ojson root;
    try {
        root = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::Parse, e.what());
    }
    if (!root.is_object()) fail(ErrorKind::Parse, "config must be a JSON object");
    RunConfig cfg;
    try {
        const auto& sp = section(root, "space");
        cfg.kappa = get_or(sp, "kappa", 0.0);
        cfg.tau = get_or(sp, "tau", 0.0);
        cfg.degenerate_ok = get_or(sp, "degenerate_ok", false);
        if (root.contains("h")) cfg.h_spec = root.at("h");
        else cfg.h_spec = ojson{{"kind", "constant"}, {"H0", 1.0}};
        cfg.h_spec = PrescribedH::from_json(cfg.h_spec).to_json();
        if (root.contains("seed") && !root.at("seed").is_null()) {
            const auto& s = root.at("seed");
            if (!s.is_object() || !s.contains("kind")) fail(ErrorKind::Parse, "seed needs a kind");
            ojson seed;
            seed["kind"] = s.at("kind").get<std::string>();
            const auto kind = seed["kind"].get<std::string>();
            if (kind == "y0") {
                seed["x0"] = s.at("x0").get<double>();
                seed["eps"] = sign_of(eps_from(get_or(s, "eps", 1)));
            } else if (kind != "axis" && kind != "equilibrium" && kind != "s2r-torus" && kind != "berger-pole" &&
                       kind != "rotational-torus") {
                fail(ErrorKind::Parse, "unknown seed kind \"" + kind + "\"");
            }
            cfg.seed = seed;
        }
        const auto& tol = section(root, "tolerances");
        cfg.rtol = get_or(tol, "rtol", cfg.rtol);
        cfg.atol = get_or(tol, "atol", cfg.atol);
        const auto& bud = section(root, "budget");
        cfg.x_max = opt_double(bud, "x_max");
        cfg.arc_budget = get_or(bud, "arc", cfg.arc_budget);
        const auto& mesh = section(root, "mesh");
        cfg.angular_res = get_or(mesh, "angular_res", cfg.angular_res);
        cfg.profile_points = get_or(mesh, "profile_points", cfg.profile_points);
        cfg.profile_arc = get_or(mesh, "profile_arc", cfg.profile_arc);
        if (mesh.contains("profile_csv") && !mesh.at("profile_csv").is_null())
            cfg.profile_csv = mesh.at("profile_csv").get<std::string>();
        cfg.mesh_topology = get_or(mesh, "topology", cfg.mesh_topology);
        const auto& plot = section(root, "phase_plot");
        cfg.plot_eps = sign_of(eps_from(get_or(plot, "eps", 1)));
        cfg.plot_x_max = opt_double(plot, "x_max");
        if (plot.contains("orbits")) {
            for (const auto& o : plot.at("orbits")) {
                cfg.orbits.push_back({o.at("x0").get<double>(), eps_from(get_or(o, "eps", 1)), get_or(o, "arc", 20.0)});
            }
        }
        if (root.contains("torus") && !root.at("torus").is_null()) {
            const auto& t = section(root, "torus");
            cfg.torus = TorusRequest{get_or(t, "H0", 1.0), t.at("x1").get<double>(), get_or(t, "delta", 1e-4)};
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, e.what());
    }
    if (cfg.tau < 0.0) fail(ErrorKind::Parse, "tau must be non-negative");
    check_positive(cfg.rtol, "rtol");
    check_positive(cfg.atol, "atol");
    check_positive(cfg.arc_budget, "budget.arc");
    if (cfg.x_max) check_positive(*cfg.x_max, "budget.x_max");
    if (cfg.angular_res < 3) fail(ErrorKind::Parse, "mesh.angular_res must be at least 3");
    if (cfg.profile_points < 3) fail(ErrorKind::Parse, "mesh.profile_points must be at least 3");
    if (cfg.mesh_topology != "auto" && cfg.mesh_topology != "sphere" && cfg.mesh_topology != "torus" &&
        cfg.mesh_topology != "tube")
        fail(ErrorKind::Parse, "mesh.topology must be auto, sphere, torus or tube");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot read config \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
    ojson j;
    j["space"] = {{"kappa", cfg.kappa}, {"tau", cfg.tau}, {"degenerate_ok", cfg.degenerate_ok}};
    j["h"] = cfg.h_spec;
    j["seed"] = cfg.seed ? *cfg.seed : ojson(nullptr);
    j["tolerances"] = {{"rtol", cfg.rtol}, {"atol", cfg.atol}};
    j["budget"] = {{"x_max", opt_json(cfg.x_max)}, {"arc", cfg.arc_budget}};
    j["mesh"] = {{"angular_res", cfg.angular_res},
                 {"profile_points", cfg.profile_points},
                 {"profile_arc", cfg.profile_arc},
                 {"profile_csv", cfg.profile_csv ? ojson(*cfg.profile_csv) : ojson(nullptr)},
                 {"topology", cfg.mesh_topology}};
    auto orbits = ojson::array();
    for (const auto& o : cfg.orbits) orbits.push_back({{"x0", o.x0}, {"eps", sign_of(o.eps)}, {"arc", o.arc}});
    j["phase_plot"] = {{"eps", cfg.plot_eps}, {"x_max", opt_json(cfg.plot_x_max)}, {"orbits", orbits}};
    if (cfg.torus) j["torus"] = {{"H0", cfg.torus->H0}, {"x1", cfg.torus->x1}, {"delta", cfg.torus->delta}};
    else j["torus"] = nullptr;
    return j;
}

std::string emit_config(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

AmbientSpace RunConfig::space() const { return AmbientSpace(kappa, tau, degenerate_ok); }

PrescribedH RunConfig::h() const { return PrescribedH::from_json(h_spec); }

ClassifySeed RunConfig::classify_seed() const {
    if (!seed) fail(ErrorKind::Parse, "config has no seed");
    const auto kind = seed->at("kind").get<std::string>();
    if (kind == "axis") return AxisSeed{};
    if (kind == "equilibrium") return EquilibriumSeed{};
    if (kind == "s2r-torus") return S2xRTorusSeed{};
    if (kind == "berger-pole") return BergerPoleSeed{};
    if (kind == "y0") return Y0Seed{seed->at("x0").get<double>(), eps_from(seed->at("eps").get<int>())};
    fail(ErrorKind::Parse, "seed kind \"" + kind + "\" is not a classification seed");
}

ClassifierOptions RunConfig::classifier_options() const {
    ClassifierOptions o;
    o.integrator.rtol = rtol;
    o.integrator.atol = atol;
    o.budget.max_arc = arc_budget;
    o.budget.x_max = x_max;
    return o;
}

}  // namespace hsurf
