#pragma once

#include <vector>

#include <json.hpp>

#include "hsurf/classifier.hpp"

namespace hsurf {

struct TorusGapResult {
    double I1;  // descent from the boundary contact to the lower y = 0 crossing
    double I2;  // ascent from the upper y = 0 crossing to the boundary contact
    double gap; // I2 - I1
    double theta_hat;
    double nu_min;
    double x_upper;  // x at theta = pi/2
    double x_lower;  // x at theta = 3pi/2
};

struct GapOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
};

// Arc of the nodoid through its boundary contact (x1, theta = pi), parametrized by theta in [pi/2, 3pi/2].
// Throws Unsupported outside kappa <= 0 < tau and ArcDegeneracy when theta' <= 0 on the arc.
TorusGapResult torus_gap(const AmbientSpace& space, const PrescribedH& h, double x1, const GapOptions& opts = {});

// True when h' <= 1e-12 on a dense sample of (-1, 0).
bool nonexistence_check(const PrescribedH& h, int samples = 4097);

struct TorusSearchOptions {
    double lambda_max_factor = 1e3;
    double gap_tol = 1e-9;
    int max_bisections = 200;
    GapOptions gap{};
    ClassifierOptions classifier{};
};

struct LambdaSample {
    double lambda;
    double gap;
};

struct TorusSearchResult {
    double lambda0;
    double gap_at_lambda0;
    double I1;
    double I2;
    double nu0;
    double delta;
    double reference_nu_min;
    std::vector<LambdaSample> schedule;
    std::vector<std::pair<double, double>> brackets;
    std::vector<LambdaSample> bisection;
    Nodoid nodoid;

    nlohmann::ordered_json to_json(const std::optional<std::string>& profile_ref = {}) const;
};

TorusSearchResult find_torus(const AmbientSpace& space, double H0, double x1, double delta,
                             const TorusSearchOptions& opts = {});

}  // namespace hsurf
