#include "hsurf/fields.hpp"

#include <algorithm>
#include <cmath>

namespace hsurf {

ProfileFrame frame(const AmbientSpace& space, double x, double theta) noexcept {
    const double k = space.kappa();
    const double t = space.tau();
    const double w = std::sqrt(1.0 + t * t * x * x);
    return {w, 4.0 + k * x * x, std::cos(theta) / w, (4.0 - k * x * x) / x};
}

std::array<double, 3> angular_field(const AmbientSpace& space, const PrescribedH& h, double x,
                                    double theta) noexcept {
    const auto fr = frame(space, x, theta);
    if (!(x > 0.0) || !std::isfinite(fr.nu)) return {NAN, NAN, NAN};
    const double st = std::sin(theta);
    const double hv = h.eval(std::clamp(fr.nu, -1.0, 1.0));
    return {std::cos(theta) / fr.w, 4.0 * st / fr.p, (8.0 * hv - fr.f * st) / (fr.p * fr.w)};
}

double phase_numerator(const AmbientSpace& space, const PrescribedH& h, Eps eps, double x, double y) {
    const double k = space.kappa();
    const double t2 = space.tau() * space.tau();
    const double radicand = std::max(0.0, 1.0 - (1.0 + t2 * x * x) * y * y);
    return 4.0 - k * x * x - y * y * (4.0 - x * x * (k - 8.0 * t2)) -
           8.0 * sign_of(eps) * x * h.eval(y) * std::sqrt(radicand);
}

double x_second_derivative(const AmbientSpace& space, const PrescribedH& h, double x, double theta) noexcept {
    const auto fr = frame(space, x, theta);
    const auto d = angular_field(space, h, x, theta);
    const double t2 = space.tau() * space.tau();
    return -std::sin(theta) * d[2] / fr.w - std::cos(theta) * t2 * x * d[0] / (fr.w * fr.w * fr.w);
}

double z_second_derivative(const AmbientSpace& space, const PrescribedH& h, double x, double theta) noexcept {
    const auto fr = frame(space, x, theta);
    const auto d = angular_field(space, h, x, theta);
    return 4.0 * std::cos(theta) * d[2] / fr.p - 8.0 * space.kappa() * x * d[0] * std::sin(theta) / (fr.p * fr.p);
}

}  // namespace hsurf
