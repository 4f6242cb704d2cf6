#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hsurf/ambient.hpp"

namespace hsurf {

struct StepFamilySpec {
    double H0 = 1.0;      // outer plateau
    double lambda = 1.0;  // inner plateau
    double nu0 = -0.5;    // inner plateau edge, in (-1, 0)
    double delta = 0.1;   // transition band width
};

// Even, positive C^1 function of the angle function y in [-1, 1].
class PrescribedH {
public:
    enum class Kind { Constant, AngleQuadratic, Table, Step };

    static PrescribedH constant(double H0);
    // H0 + slope * y^2
    static PrescribedH angle_quadratic(double H0, double slope);
    // Knots (|y|, h) covering [0, 1]; monotone cubic with zero slope at y = 0.
    static PrescribedH table(std::span<const std::pair<double, double>> knots);
    // Throws Spec when the transition bands do not fit in [-1, 1].
    static PrescribedH step_family(const StepFamilySpec& spec);

    static PrescribedH from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;

    Kind kind() const noexcept;

    // Inputs within 1e-12 of +-1 are clamped; beyond that Range is thrown.
    double eval(double y) const;
    double eval_dh(double y) const;

    // |y| values where the second derivative jumps.
    std::vector<double> breakpoints() const;

private:
    struct Constant {
        double H0;
    };
    struct Quadratic {
        double H0;
        double slope;
    };
    struct Table {
        std::vector<double> t;
        std::vector<double> v;
        std::vector<double> m;
    };
    struct Step {
        StepFamilySpec spec;
    };
    using Payload = std::variant<Constant, Quadratic, Table, Step>;

    explicit PrescribedH(Payload p) : payload_(std::move(p)) {}

    // value and derivative with respect to |y|
    std::pair<double, double> profile(double a) const;

    Payload payload_;
};

struct C1Violation {
    enum class Clause { Positivity, CriticalBound };
    double y;
    Clause clause;
    double margin;
};

struct ValidationReport {
    bool ok = true;
    double min_h = 0.0;
    double min_bound_margin = 0.0;  // min over samples of 4h^2 + kappa(1 - y^2)
    double y_at_min_bound = 0.0;
    std::vector<C1Violation> violations;

    nlohmann::ordered_json to_json() const;
};

// Samples n Chebyshev points of [-1, 1]. Never throws.
ValidationReport validate_c1(const PrescribedH& h, const AmbientSpace& space, int samples = 4097);

PrescribedH make_step_family(const StepFamilySpec& spec);

}  // namespace hsurf
