#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hsurf/integrator.hpp"
#include "hsurf/phaseplane.hpp"

namespace hsurf {

struct ClassifierOptions {
    IntegratorOptions integrator{};
    Budget budget{};
    double closure_tol = 1e-6;      // nodoid height closure
    double period_tol = 1e-8;       // (x, nu) return distance
    double separatrix_tol = 1e-9;   // relative distance to r0 / e0 treated as ambiguous
    double nu_tol = 0.01;           // escape criterion for pole orbits
    double s_seed = 1e-5;
};

struct Cylinder {
    double radius;
    double cmc;
    bool hopf_torus;
};

struct Sphere {
    double r0;
    double height;
    std::optional<bool> embedded;  // set when the space has a vertical period
    Trajectory half;               // axis to equator
};

struct Unduloid {
    double neck;
    double bulge;
    double period_arc;
    double z_pitch;
    double closure_residual;
    Eps phase = Eps::Plus;
    Trajectory orbit;
};

struct Nodoid {
    double outer;
    double omega_x;
    double inner;
    double z0;  // height of the first boundary contact
    double z2;  // height of the second boundary contact
    bool closes;
    double closure_residual;  // |z2 + z0|
    Trajectory forward;
    Trajectory backward;
};

struct TorusS2xR {
    double x1;
    double closure_residual;
    Trajectory profile;
};

struct TorusRotational {
    double lambda0;
    Nodoid nodoid;
};

struct Compactness {
    enum class Kind { EmbeddedTorus, ImmersedTorus, DenseNoncompact };
    Kind kind;
    long p = 0;
    long q = 0;

    bool operator==(const Compactness&) const = default;
};

struct BergerPoleChain {
    double xi0;
    double bracket_lo;  // reaches the boundary curve
    double bracket_hi;  // returns to y = 0
    int bisection_steps;
    double z_drift;
    Compactness compactness;
    double escape_x;
    double escape_nu;
};

using SurfaceClass = std::variant<Cylinder, Sphere, Unduloid, Nodoid, TorusS2xR, TorusRotational, BergerPoleChain>;

std::string tag_of(const SurfaceClass& sc);
nlohmann::ordered_json to_json(const SurfaceClass& sc, const std::optional<std::string>& trajectory_ref = {});

struct AxisSeed {};
struct EquilibriumSeed {};
struct Y0Seed {
    double x0;
    Eps eps = Eps::Plus;
};
struct S2xRTorusSeed {};
struct BergerPoleSeed {};
using ClassifySeed = std::variant<AxisSeed, EquilibriumSeed, Y0Seed, S2xRTorusSeed, BergerPoleSeed>;

Cylinder build_cylinder(const AmbientSpace& space, const PrescribedH& h);
Sphere shoot_sphere(const AmbientSpace& space, const PrescribedH& h, const ClassifierOptions& opts = {});
Unduloid trace_unduloid(const AmbientSpace& space, const PrescribedH& h, double x0, const ClassifierOptions& opts = {});
Nodoid trace_nodoid(const AmbientSpace& space, const PrescribedH& h, double x0, const ClassifierOptions& opts = {});
TorusS2xR s2r_torus(const AmbientSpace& space, const PrescribedH& h, const ClassifierOptions& opts = {});
BergerPoleChain berger_pole_orbit(const AmbientSpace& space, const PrescribedH& h, const ClassifierOptions& opts = {});
Compactness berger_compactness(double drift, const AmbientSpace& space, long max_denominator = 64);
SurfaceClass classify(const AmbientSpace& space, const PrescribedH& h, const ClassifySeed& seed,
                      const ClassifierOptions& opts = {});

// Outcome of a single pole-chart shot from the y = 0 seed xi of the lower phase plane.
enum class PoleShot { ReachesBoundary, Returns, Undecided };
PoleShot berger_pole_shot(const AmbientSpace& space, const PrescribedH& h, double xi);

// Closed profile of a surface as ordered (s, x, z, theta) points. Axis points carry x = 0.
struct Profile {
    std::vector<AngularState> points;
    bool closed_loop = false;   // last point joins the first
    bool axis_ends = false;     // both ends lie on the axis
};

Profile sphere_profile(const Sphere& sphere, int points = 401);
Profile nodoid_profile(const Nodoid& nodoid, int points = 801);
Profile trajectory_profile(const Trajectory& traj, int points = 401);

}  // namespace hsurf
