#include "hsurf/ambient.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hsurf/error.hpp"

namespace hsurf {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Range: return "range error";
        case ErrorKind::Spec: return "spec error";
        case ErrorKind::Unsupported: return "unsupported space";
        case ErrorKind::Singularity: return "singularity";
        case ErrorKind::Stiffness: return "stiffness";
        case ErrorKind::Geometry: return "geometry error";
        case ErrorKind::Classification: return "classification failure";
        case ErrorKind::SeedWrongSide: return "seed on wrong side";
        case ErrorKind::NotAnUnduloid: return "not an unduloid";
        case ErrorKind::Seed: return "seed error";
        case ErrorKind::AmbiguousSeed: return "ambiguous seed";
        case ErrorKind::SearchFailure: return "search failure";
        case ErrorKind::ArcDegeneracy: return "arc degeneracy";
        case ErrorKind::NoCrossing: return "no crossing";
        case ErrorKind::Closure: return "closure failure";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Io: return "io error";
    }
    return "error";
}

AmbientSpace::AmbientSpace(double kappa, double tau, bool degenerate_ok)
    : kappa_(kappa), tau_(tau), degenerate_ok_(degenerate_ok) {
    if (!std::isfinite(kappa) || !std::isfinite(tau)) fail(ErrorKind::Domain, "non-finite kappa or tau");
    if (tau < 0.0) fail(ErrorKind::Domain, "tau must be non-negative");
    if (is_space_form() && !degenerate_ok) {
        std::ostringstream msg;
        msg << "kappa = 4 tau^2 (kappa=" << kappa << ", tau=" << tau << ") needs degenerate_ok";
        fail(ErrorKind::Domain, msg.str());
    }
}

bool AmbientSpace::is_space_form() const noexcept { return kappa_ == 4.0 * tau_ * tau_; }

std::optional<double> AmbientSpace::wall_radius() const noexcept {
    if (kappa_ < 0.0) return 2.0 / std::sqrt(-kappa_);
    return std::nullopt;
}

bool AmbientSpace::in_domain(double x) const noexcept {
    if (!(x > 0.0) || !std::isfinite(x)) return false;
    auto wall = wall_radius();
    return !wall || x < *wall;
}

std::array<double, 2> AmbientSpace::metric_coeffs(double x) const {
    if (!in_domain(x)) {
        std::ostringstream msg;
        msg << "x=" << x << " outside the model domain";
        fail(ErrorKind::Domain, msg.str());
    }
    const double p = 4.0 + kappa_ * x * x;
    return {1.0 + tau_ * tau_ * x * x, p * p / 16.0};
}

std::optional<double> AmbientSpace::vertical_period() const noexcept {
    if (kappa_ > 0.0 && tau_ > 0.0) return 8.0 * tau_ * std::numbers::pi / kappa_;
    return std::nullopt;
}

std::array<double, 4> AmbientSpace::berger_embed(double x, double y, double z) const {
    if (!(kappa_ > 0.0 && tau_ > 0.0)) fail(ErrorKind::Unsupported, "berger_embed needs kappa > 0 and tau > 0");
    const double half = std::sqrt(kappa_) / 2.0;
    const double norm = 1.0 / std::sqrt(1.0 + half * half * (x * x + y * y));
    const double phase = kappa_ * z / (4.0 * tau_);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    // v = norm * half (x + i y) e^{i phase}, w = norm e^{i phase}
    const double vr = norm * half * (x * c - y * s);
    const double vi = norm * half * (x * s + y * c);
    return {vr, vi, norm * c, norm * s};
}

double AmbientSpace::default_x_max() const noexcept {
    if (kappa_ > 0.0) return 50.0 / std::sqrt(kappa_);
    if (kappa_ < 0.0) return 0.999 * *wall_radius();
    return 1e3;
}

}  // namespace hsurf
