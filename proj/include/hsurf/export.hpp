#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsurf/classifier.hpp"

namespace hsurf {

// Header "s,x,z,theta,nu,eps,H_residual"; 17 significant digits; nan where the residual is undefined.
void write_trajectory_csv(std::ostream& out, const AmbientSpace& space, const PrescribedH& h,
                          const std::vector<AngularState>& samples);
nlohmann::ordered_json events_json(const std::vector<Event>& events);

// Reads (s, x, z, theta) columns back from a trajectory CSV.
std::vector<AngularState> read_trajectory_csv(std::istream& in);

struct Mesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;  // zero-based
    bool closed = false;

    int euler_characteristic() const;
    // Every edge shared by exactly two faces.
    bool watertight() const;
};

enum class MeshTopology { Auto, Sphere, Torus, Tube };

// Revolves a profile around the axis. Throws Domain when a torus is requested for an open profile.
Mesh revolve(const Profile& profile, int angular_res, MeshTopology topology = MeshTopology::Auto);

// Optional Berger 4D coordinates go to comment lines after each vertex.
void write_obj(std::ostream& out, const Mesh& mesh, const std::optional<AmbientSpace>& berger = std::nullopt);

struct PhasePlotOrbit {
    std::vector<std::array<double, 2>> points;  // (x, nu), NaN breaks the polyline
};

struct PhasePlotInput {
    AmbientSpace space;
    PrescribedH h;
    Eps eps;
    std::optional<double> x_max;
    std::vector<PhasePlotOrbit> orbits;
};

std::string phase_plot_svg(const PhasePlotInput& input);

// Projection of an angular trajectory onto the phase plane of the given sign.
PhasePlotOrbit project_orbit(const AmbientSpace& space, const Trajectory& traj, Eps eps);

}  // namespace hsurf
