#pragma once

#include "vortex/vec2.hpp"

#include <functional>
#include <span>
#include <vector>

namespace vortex {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    long evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_depth = 48;
    long max_evaluations = 2000000;
};

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int n);

double fixed_gauss(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive bisection driven by an embedded Gauss 7/15 pair. Handles
// integrable endpoint singularities (all nodes are interior).
QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                    QuadratureOptions opts = {});

// 4x4 tensor Gauss rule over an axis-aligned cell.
double tensor_gauss4(const std::function<double(Vec2)>& f, const Rect& cell);

} // namespace vortex
