#include "hsurf/phaseplane.hpp"

#include <cmath>

namespace hsurf {

namespace {

constexpr double kSlack = 1e-12;

struct GammaParts {
    double denom;
    double root;
    double hv;
};

std::optional<GammaParts> gamma_parts(const AmbientSpace& space, const PrescribedH& h, Eps eps, double y) {
    if (!(std::abs(y) < 1.0)) return std::nullopt;
    const double k = space.kappa();
    const double t2 = space.tau() * space.tau();
    const double hv = h.eval(y);
    const double c = 1.0 - y * y;
    const double radicand = 4.0 * hv * hv + k * c + 4.0 * t2 * y * y;
    if (radicand < 0.0) return std::nullopt;
    const double r = std::sqrt(radicand);
    const double a = k * c + 8.0 * (hv * hv + t2 * y * y);
    const double b = 4.0 * hv * r;
    double d = a + sign_of(eps) * b;
    if (eps == Eps::Minus && a + b > 0.0) {
        // a^2 - b^2 without cancellation; matters as y -> +-1 when kappa > 0
        const double u = k * c + 8.0 * t2 * y * y;
        d = (u * u + 64.0 * hv * hv * t2 * y * y) / (a + b);
    }
    if (!(d > 0.0)) return std::nullopt;
    return GammaParts{d, r, hv};
}

int sign_with_tol(double v, double tol) {
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}

}  // namespace

std::optional<double> raw_gamma_value(const AmbientSpace& space, const PrescribedH& h, Eps eps, double y) {
    const auto parts = gamma_parts(space, h, eps, y);
    if (!parts) return std::nullopt;
    return 2.0 * std::sqrt((1.0 - y * y) / parts->denom);
}

std::optional<double> gamma_curve(const AmbientSpace& space, const PrescribedH& h, Eps eps, double y) {
    const auto parts = gamma_parts(space, h, eps, y);
    if (!parts) return std::nullopt;
    // squaring introduced a spurious branch; keep genuine zeros only
    if (!(parts->root + 2.0 * sign_of(eps) * parts->hv > 0.0)) return std::nullopt;
    const double x = 2.0 * std::sqrt((1.0 - y * y) / parts->denom);
    if (!(x > 0.0)) return std::nullopt;
    if (auto wall = space.wall_radius(); wall && !(x < *wall - kSlack)) return std::nullopt;
    const double t2 = space.tau() * space.tau();
    if (!(y * y < 1.0 / (1.0 + t2 * x * x) - kSlack)) return std::nullopt;
    return x;
}

std::optional<Equilibrium> equilibrium(const AmbientSpace& space, const PrescribedH& h, Eps eps) {
    const double h0 = h.eval(0.0);
    const double r = std::sqrt(4.0 * h0 * h0 + space.kappa());
    if (eps == Eps::Plus) return Equilibrium{2.0 / (r + 2.0 * h0), Eps::Plus};
    if (space.kappa() > 0.0) return Equilibrium{2.0 / (r - 2.0 * h0), Eps::Minus};
    return std::nullopt;
}

double crossing_poly_plus(const AmbientSpace& space, const PrescribedH& h, double x) {
    return 4.0 - x * (8.0 * h.eval(0.0) + space.kappa() * x);
}

double crossing_poly_minus(const AmbientSpace& space, const PrescribedH& h, double x) {
    return 4.0 + x * (8.0 * h.eval(0.0) - space.kappa() * x);
}

int y0_crossing_direction(const AmbientSpace& space, const PrescribedH& h, Eps eps, double x0) {
    if (auto e = equilibrium(space, h, eps); e && std::abs(x0 - e->x) <= 1e-12 * e->x) return 0;
    const double v = eps == Eps::Plus ? crossing_poly_plus(space, h, x0) : crossing_poly_minus(space, h, x0);
    return sign_with_tol(v, 0.0);
}

RegionInfo region_classify(const AmbientSpace& space, const PrescribedH& h, const PhaseState& state) {
    RegionInfo info{GammaSide::Undefined, sign_with_tol(state.y, 0.0), 0, 0};
    const double k = space.kappa();
    const double scale = 4.0 + std::abs(k) * state.x * state.x + 8.0 * state.x * h.eval(state.y);
    info.sign_dy_ds = sign_with_tol(phase_numerator(space, h, state.eps, state.x, state.y), 1e-12 * scale);
    if (auto g = gamma_curve(space, h, state.eps, state.y)) {
        if (std::abs(state.x - *g) <= 1e-12 * *g) {
            info.side_of_gamma = GammaSide::OnCurve;
            info.sign_dy_ds = 0;
        } else {
            info.side_of_gamma = state.x < *g ? GammaSide::Left : GammaSide::Right;
        }
    }
    info.sign_dy_dx = info.sign_dx_ds == 0 ? 0 : info.sign_dy_ds * info.sign_dx_ds;
    return info;
}

}  // namespace hsurf
