#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "hsurf/ambient.hpp"
#include "hsurf/error.hpp"
#include "hsurf/fields.hpp"
#include "hsurf/ode.hpp"
#include "hsurf/prescribed.hpp"

namespace hsurf {

enum class EventKind {
    Y0Crossing,
    OmegaPlus,
    OmegaMinus,
    AxisContact,
    WallApproach,
    EscapeXMax,
    PeriodClosure,
    StallBudget,
};

std::string_view to_string(EventKind kind) noexcept;

struct Event {
    EventKind kind;
    double s;
    AngularState state;
};

enum class StopReason {
    Y0Count,
    OmegaCount,
    AxisContact,
    PeriodClosure,
    ThetaTarget,
    WallApproach,
    EscapeXMax,
    Budget,
};

std::string_view to_string(StopReason reason) noexcept;

struct PeriodReference {
    double x;            // x at the reference section crossing
    double nu = 0.0;
    int theta_direction; // sign of theta' at the reference crossing
    double tolerance = 1e-8;
};

struct StopSpec {
    int y0_crossings = 0;  // stop at the n-th crossing; 0 disables
    int omega_plus = 0;
    int omega_minus = 0;
    int omega_any = 0;
    bool axis_contact = true;
    std::optional<PeriodReference> period;
    std::optional<double> theta_target;
};

struct Budget {
    double max_arc = 1e3;
    std::optional<double> x_max;  // default from AmbientSpace::default_x_max
    int max_events = 10000;
    long max_steps = 2'000'000;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    int direction = 1;
    double axis_stop = 1e-5;
    double x_floor = 1e-8;
    double band_clamp = 1e-3;  // step cap across a breakpoint of h
};

class Trajectory {
public:
    std::vector<AngularState> samples;
    std::vector<Event> events;
    std::vector<ode::DenseSegment<3>> segments;  // ordered by increasing s
    StopReason stop = StopReason::Budget;

    double s_begin() const;
    double s_end() const;
    // Dense evaluation; s is clamped to the covered range.
    AngularState at(double s) const;
    std::vector<Event> events_of(EventKind kind) const;
};

class StiffnessError : public Error {
public:
    StiffnessError(const std::string& what, AngularState last)
        : Error(ErrorKind::Stiffness, what), last_good(last) {}
    AngularState last_good;
};

// (dx, dy) of the first order system in (x, nu); throws Singularity for x <= 0 and Domain when
// 1 - (1 + tau^2 x^2) y^2 < -1e-12.
std::array<double, 2> rhs_phase(const AmbientSpace& space, const PrescribedH& h, const PhaseState& state);

// (dx, dz, dtheta); throws Singularity for x <= 0.
std::array<double, 3> rhs_angular(const AmbientSpace& space, const PrescribedH& h, const AngularState& state);

// Series start off the axis at arc length s_seed. Orientation -1 is the reflected state, reached backward in s.
AngularState axis_start(const AmbientSpace& space, const PrescribedH& h, int orientation, double s_seed = 1e-5);

Trajectory integrate(const AmbientSpace& space, const PrescribedH& h, const AngularState& init,
                     const StopSpec& stop, const Budget& budget = {}, const IntegratorOptions& opts = {});

// max over well-conditioned samples of |H - h(nu)| with H recomputed from x, x', x''.
double curvature_residual(const AmbientSpace& space, const PrescribedH& h, const Trajectory& traj);
// NaN when the sample is too close to a vertical tangent or the axis for the formula to be meaningful.
double curvature_residual_at(const AmbientSpace& space, const PrescribedH& h, const AngularState& st);

// (1 + tau^2 x^2) x'^2 + ((4 + kappa x^2)^2 / 16) z'^2 - 1 at a state.
double arc_length_defect(const AmbientSpace& space, const PrescribedH& h, const AngularState& st);

inline double nu_of(const AmbientSpace& space, const AngularState& st) {
    return frame(space, st.x, st.theta).nu;
}

}  // namespace hsurf
