#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsurf/classifier.hpp"
#include "hsurf/prescribed.hpp"

namespace hsurf {

struct OrbitRequest {
    double x0;
    Eps eps = Eps::Plus;
    double arc = 20.0;
};

struct TorusRequest {
    double H0 = 1.0;
    double x1 = 1.0;
    double delta = 1e-4;
};

// Parsed and normalized command configuration. Missing fields take defaults so that
// emit(parse(emit(c))) == emit(c).
struct RunConfig {
    double kappa = 0.0;
    double tau = 0.0;
    bool degenerate_ok = false;
    nlohmann::ordered_json h_spec;
    std::optional<nlohmann::ordered_json> seed;
    double rtol = 1e-10;
    double atol = 1e-12;
    std::optional<double> x_max;
    double arc_budget = 1e3;
    int angular_res = 64;
    int profile_points = 401;
    double profile_arc = 10.0;
    std::optional<std::string> profile_csv;
    std::string mesh_topology = "auto";  // auto | sphere | torus | tube
    int plot_eps = 1;
    std::optional<double> plot_x_max;
    std::vector<OrbitRequest> orbits;
    std::optional<TorusRequest> torus;

    AmbientSpace space() const;
    PrescribedH h() const;
    ClassifySeed classify_seed() const;
    ClassifierOptions classifier_options() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const RunConfig& cfg);
std::string emit_config(const RunConfig& cfg);

}  // namespace hsurf
