#include "hsurf/prescribed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hsurf/error.hpp"

namespace hsurf {

namespace {

constexpr double kClampSlack = 1e-12;

double clamp_unit(double y) {
    if (!std::isfinite(y) || std::abs(y) > 1.0 + kClampSlack) {
        std::ostringstream msg;
        msg << "angle value y=" << y << " outside [-1, 1]";
        fail(ErrorKind::Range, msg.str());
    }
    return std::clamp(y, -1.0, 1.0);
}

// Fritsch-Carlson slopes; the first slope is pinned to zero so the even extension is C^1.
std::vector<double> monotone_slopes(const std::vector<double>& t, const std::vector<double>& v) {
    const std::size_t n = t.size();
    std::vector<double> d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k]) / (t[k + 1] - t[k]);

    std::vector<double> m(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] > 0.0) m[k] = 0.5 * (d[k - 1] + d[k]);
    }
    m[n - 1] = d[n - 2];
    m[0] = 0.0;

    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (d[k] == 0.0) {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        const double a = m[k] / d[k];
        const double b = m[k + 1] / d[k];
        if (a < 0.0) m[k] = 0.0;
        if (b < 0.0) m[k + 1] = 0.0;
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double s = 3.0 / std::sqrt(r);
            m[k] = s * a * d[k];
            m[k + 1] = s * b * d[k];
        }
    }
    m[0] = 0.0;
    return m;
}

}  // namespace

PrescribedH PrescribedH::constant(double H0) {
    if (!std::isfinite(H0)) fail(ErrorKind::Spec, "constant value must be finite");
    return PrescribedH(Constant{H0});
}

PrescribedH PrescribedH::angle_quadratic(double H0, double slope) {
    if (!std::isfinite(H0) || !std::isfinite(slope)) fail(ErrorKind::Spec, "coefficients must be finite");
    return PrescribedH(Quadratic{H0, slope});
}

PrescribedH PrescribedH::table(std::span<const std::pair<double, double>> knots) {
    std::vector<std::pair<double, double>> sorted(knots.begin(), knots.end());
    if (sorted.size() < 2) fail(ErrorKind::Spec, "table needs at least two knots");
    std::sort(sorted.begin(), sorted.end());
    for (auto [y, h] : sorted) {
        if (!std::isfinite(y) || !std::isfinite(h)) fail(ErrorKind::Spec, "table knots must be finite");
        if (y < 0.0 || y > 1.0) fail(ErrorKind::Spec, "table knots must lie in [0, 1]");
    }
    if (sorted.front().first != 0.0 || sorted.back().first != 1.0)
        fail(ErrorKind::Spec, "table knots must span [0, 1]");
    Table tab;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (k > 0 && sorted[k].first == sorted[k - 1].first) fail(ErrorKind::Spec, "duplicate table knot");
        tab.t.push_back(sorted[k].first);
        tab.v.push_back(sorted[k].second);
    }
    tab.m = monotone_slopes(tab.t, tab.v);
    return PrescribedH(std::move(tab));
}

PrescribedH PrescribedH::step_family(const StepFamilySpec& spec) {
    const bool finite = std::isfinite(spec.H0) && std::isfinite(spec.lambda) && std::isfinite(spec.nu0) &&
                        std::isfinite(spec.delta);
    if (!finite) fail(ErrorKind::Spec, "step family parameters must be finite");
    if (!(spec.H0 > 0.0)) fail(ErrorKind::Spec, "H0 must be positive");
    if (spec.lambda < spec.H0) fail(ErrorKind::Spec, "lambda must be at least H0");
    if (!(spec.nu0 > -1.0 && spec.nu0 < 0.0)) fail(ErrorKind::Spec, "nu0 must lie in (-1, 0)");
    if (!(spec.delta > 0.0)) fail(ErrorKind::Spec, "delta must be positive");
    if (!(spec.nu0 - spec.delta > -1.0)) {
        std::ostringstream msg;
        msg << "transition band [nu0-delta, nu0] = [" << spec.nu0 - spec.delta << ", " << spec.nu0
            << "] leaves [-1, 1]";
        fail(ErrorKind::Spec, msg.str());
    }
    if (spec.lambda == spec.H0) return constant(spec.H0);
    return PrescribedH(Step{spec});
}

PrescribedH make_step_family(const StepFamilySpec& spec) { return PrescribedH::step_family(spec); }

PrescribedH::Kind PrescribedH::kind() const noexcept {
    switch (payload_.index()) {
        case 0: return Kind::Constant;
        case 1: return Kind::AngleQuadratic;
        case 2: return Kind::Table;
        default: return Kind::Step;
    }
}

std::pair<double, double> PrescribedH::profile(double a) const {
    struct Visitor {
        double a;
        std::pair<double, double> operator()(const Constant& c) const { return {c.H0, 0.0}; }
        std::pair<double, double> operator()(const Quadratic& q) const {
            return {q.H0 + q.slope * a * a, 2.0 * q.slope * a};
        }
        std::pair<double, double> operator()(const Table& tab) const {
            auto it = std::upper_bound(tab.t.begin(), tab.t.end(), a);
            std::size_t k = it == tab.t.begin() ? 0 : static_cast<std::size_t>(it - tab.t.begin()) - 1;
            k = std::min(k, tab.t.size() - 2);
            const double h = tab.t[k + 1] - tab.t[k];
            const double u = (a - tab.t[k]) / h;
            const double u2 = u * u;
            const double u3 = u2 * u;
            const double h00 = 2 * u3 - 3 * u2 + 1;
            const double h10 = u3 - 2 * u2 + u;
            const double h01 = -2 * u3 + 3 * u2;
            const double h11 = u3 - u2;
            const double value = h00 * tab.v[k] + h10 * h * tab.m[k] + h01 * tab.v[k + 1] + h11 * h * tab.m[k + 1];
            const double d00 = (6 * u2 - 6 * u) / h;
            const double d10 = 3 * u2 - 4 * u + 1;
            const double d01 = (-6 * u2 + 6 * u) / h;
            const double d11 = 3 * u2 - 2 * u;
            const double slope = d00 * tab.v[k] + d10 * tab.m[k] + d01 * tab.v[k + 1] + d11 * tab.m[k + 1];
            return {value, slope};
        }
        std::pair<double, double> operator()(const Step& st) const {
            const auto& sp = st.spec;
            const double inner = -sp.nu0;
            if (a <= inner) return {sp.lambda, 0.0};
            if (a >= inner + sp.delta) return {sp.H0, 0.0};
            const double t = (inner + sp.delta - a) / sp.delta;
            const double jump = sp.lambda - sp.H0;
            return {sp.H0 + jump * t * t * (3.0 - 2.0 * t), -jump * 6.0 * t * (1.0 - t) / sp.delta};
        }
    };
    return std::visit(Visitor{a}, payload_);
}

double PrescribedH::eval(double y) const { return profile(std::abs(clamp_unit(y))).first; }

double PrescribedH::eval_dh(double y) const {
    const double c = clamp_unit(y);
    const double slope = profile(std::abs(c)).second;
    if (c > 0.0) return slope;
    if (c < 0.0) return -slope;
    return 0.0;
}

std::vector<double> PrescribedH::breakpoints() const {
    if (const auto* tab = std::get_if<Table>(&payload_)) {
        return {tab->t.begin() + 1, tab->t.end() - 1};
    }
    if (const auto* st = std::get_if<Step>(&payload_)) {
        return {-st->spec.nu0, -st->spec.nu0 + st->spec.delta};
    }
    return {};
}

PrescribedH PrescribedH::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) fail(ErrorKind::Parse, "h spec needs a \"kind\" field");
    const auto kind = j.at("kind").get<std::string>();
    try {
        if (kind == "constant") return constant(j.at("H0").get<double>());
        if (kind == "angle-linear" || kind == "angle-quadratic")
            return angle_quadratic(j.at("H0").get<double>(), j.at("slope").get<double>());
        if (kind == "table") {
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : j.at("knots")) {
                if (!k.is_array() || k.size() != 2) fail(ErrorKind::Parse, "table knot must be [y, h]");
                knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
            return table(knots);
        }
        if (kind == "step") {
            StepFamilySpec sp{j.at("H0").get<double>(), j.at("lambda").get<double>(), j.at("nu0").get<double>(),
                              j.at("delta").get<double>()};
            return step_family(sp);
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("h spec: ") + e.what());
    }
    fail(ErrorKind::Parse, "unknown h kind \"" + kind + "\"");
}

nlohmann::ordered_json PrescribedH::to_json() const {
    nlohmann::ordered_json j;
    if (const auto* c = std::get_if<Constant>(&payload_)) {
        j["kind"] = "constant";
        j["H0"] = c->H0;
    } else if (const auto* q = std::get_if<Quadratic>(&payload_)) {
        j["kind"] = "angle-linear";
        j["H0"] = q->H0;
        j["slope"] = q->slope;
    } else if (const auto* tab = std::get_if<Table>(&payload_)) {
        j["kind"] = "table";
        auto knots = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < tab->t.size(); ++k) knots.push_back({tab->t[k], tab->v[k]});
        j["knots"] = knots;
    } else {
        const auto& sp = std::get<Step>(payload_).spec;
        j["kind"] = "step";
        j["H0"] = sp.H0;
        j["lambda"] = sp.lambda;
        j["nu0"] = sp.nu0;
        j["delta"] = sp.delta;
    }
    return j;
}

ValidationReport validate_c1(const PrescribedH& h, const AmbientSpace& space, int samples) {
    ValidationReport rep;
    samples = std::max(samples, 2);
    rep.min_h = INFINITY;
    rep.min_bound_margin = INFINITY;
    for (int k = 0; k < samples; ++k) {
        // the middle node of an odd sample is y = 0 exactly, where evenness puts extrema
        const double y = 2 * k == samples - 1 ? 0.0 : -std::cos(std::numbers::pi * k / (samples - 1));
        double value = 0.0;
        try {
            value = h.eval(y);
        } catch (const Error&) {
            value = NAN;
        }
        const double bound = 4.0 * value * value + space.kappa() * (1.0 - y * y);
        if (!(value > 0.0)) {
            rep.violations.push_back({y, C1Violation::Clause::Positivity, value});
        }
        if (!(bound > 0.0)) {
            rep.violations.push_back({y, C1Violation::Clause::CriticalBound, bound});
        }
        if (!(value >= rep.min_h)) rep.min_h = value;
        if (!(bound >= rep.min_bound_margin)) {
            rep.min_bound_margin = bound;
            rep.y_at_min_bound = y;
        }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

nlohmann::ordered_json ValidationReport::to_json() const {
    nlohmann::ordered_json j;
    j["ok"] = ok;
    j["min_h"] = min_h;
    j["min_bound_margin"] = min_bound_margin;
    j["y_at_min_bound"] = y_at_min_bound;
    auto list = nlohmann::ordered_json::array();
    for (const auto& v : violations) {
        nlohmann::ordered_json e;
        e["y"] = v.y;
        e["clause"] = v.clause == C1Violation::Clause::Positivity ? "positivity" : "critical-bound";
        e["margin"] = v.margin;
        list.push_back(e);
    }
    j["violations"] = list;
    return j;
}

}  // namespace hsurf
