#pragma once

#include <array>

#include "hsurf/ambient.hpp"
#include "hsurf/prescribed.hpp"

namespace hsurf {

enum class Eps : int { Plus = 1, Minus = -1 };

constexpr int sign_of(Eps e) noexcept { return static_cast<int>(e); }
constexpr Eps flip(Eps e) noexcept { return e == Eps::Plus ? Eps::Minus : Eps::Plus; }

struct PhaseState {
    double x;
    double y;
    Eps eps;
};

struct AngularState {
    double s = 0.0;
    double x = 0.0;
    double z = 0.0;
    double theta = 0.0;
};

// Derived quantities of a profile point (x, theta).
struct ProfileFrame {
    double w;      // sqrt(1 + tau^2 x^2)
    double p;      // 4 + kappa x^2
    double nu;     // cos(theta) / w
    double f;      // (4 - kappa x^2) / x
};

ProfileFrame frame(const AmbientSpace& space, double x, double theta) noexcept;

// Unchecked fields; callers guarantee x > 0.
std::array<double, 3> angular_field(const AmbientSpace& space, const PrescribedH& h, double x,
                                    double theta) noexcept;
double phase_numerator(const AmbientSpace& space, const PrescribedH& h, Eps eps, double x, double y);

// Second derivative of x along the profile, from the vector field.
double x_second_derivative(const AmbientSpace& space, const PrescribedH& h, double x, double theta) noexcept;
double z_second_derivative(const AmbientSpace& space, const PrescribedH& h, double x, double theta) noexcept;

}  // namespace hsurf
