#pragma once

#include <optional>

#include "hsurf/ambient.hpp"
#include "hsurf/fields.hpp"
#include "hsurf/prescribed.hpp"

namespace hsurf {

struct Equilibrium {
    double x;
    Eps eps;
};

enum class GammaSide { Left, OnCurve, Right, Undefined };

struct RegionInfo {
    GammaSide side_of_gamma;
    int sign_dx_ds;  // sign of y
    int sign_dy_ds;  // sign of the y-component along the orbit
    int sign_dy_dx;  // slope sign of the orbit read as a graph y(x)
};

// Nullcline x of the y-component at height y, when it lies inside the phase plane.
std::optional<double> gamma_curve(const AmbientSpace& space, const PrescribedH& h, Eps eps, double y);

// Formula value whenever the denominator is positive, even if the point is not a genuine zero
// or lies outside the phase plane.
std::optional<double> raw_gamma_value(const AmbientSpace& space, const PrescribedH& h, Eps eps, double y);

std::optional<Equilibrium> equilibrium(const AmbientSpace& space, const PrescribedH& h, Eps eps);

// Crossing polynomials of the y = 0 axis.
double crossing_poly_plus(const AmbientSpace& space, const PrescribedH& h, double x);
double crossing_poly_minus(const AmbientSpace& space, const PrescribedH& h, double x);

int y0_crossing_direction(const AmbientSpace& space, const PrescribedH& h, Eps eps, double x0);

RegionInfo region_classify(const AmbientSpace& space, const PrescribedH& h, const PhaseState& state);

// Boundary curve y = +-1/sqrt(1 + tau^2 x^2).
inline double omega_height(const AmbientSpace& space, double x) {
    return 1.0 / std::sqrt(1.0 + space.tau() * space.tau() * x * x);
}

}  // namespace hsurf
