#pragma once

#include <array>
#include <optional>

namespace hsurf {

// Homogeneous 3-space with a 4-dimensional isometry group, in the rotational
// model where x is the distance to the axis and z the fiber height.
class AmbientSpace {
public:
    // Throws Domain when tau < 0, or when kappa == 4 tau^2 without degenerate_ok.
    AmbientSpace(double kappa, double tau, bool degenerate_ok = false);

    double kappa() const noexcept { return kappa_; }
    double tau() const noexcept { return tau_; }
    bool degenerate_ok() const noexcept { return degenerate_ok_; }
    bool is_space_form() const noexcept;

    // 2/sqrt(-kappa) for kappa < 0.
    std::optional<double> wall_radius() const noexcept;
    bool in_domain(double x) const noexcept;

    // (1 + tau^2 x^2) and (4 + kappa x^2)^2 / 16.
    std::array<double, 2> metric_coeffs(double x) const;

    // 8 tau pi / kappa when kappa > 0 and tau > 0.
    std::optional<double> vertical_period() const noexcept;

    // Unit-sphere image (Re v, Im v, Re w, Im w) of the point (x, y, z) of the model.
    std::array<double, 4> berger_embed(double x, double y, double z) const;

    // Largest x the integrator may reach by default.
    double default_x_max() const noexcept;

private:
    double kappa_;
    double tau_;
    bool degenerate_ok_;
};

}  // namespace hsurf
