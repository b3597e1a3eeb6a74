#include "vortex/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vortex {

namespace {

GaussRule make_gauss_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev estimate of the i-th root of P_n, refined by Newton.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::mutex g_rule_mutex;
std::map<int, GaussRule> g_rules;

struct PanelEval {
    double coarse;
    double fine;
};

PanelEval eval_panel(const std::function<double(double)>& f, double a, double b,
                     const GaussRule& g7, const GaussRule& g15, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s7 = 0.0, s15 = 0.0;
    for (int i = 0; i < 7; ++i) s7 += g7.weights[i] * f(c + h * g7.nodes[i]);
    for (int i = 0; i < 15; ++i) s15 += g15.weights[i] * f(c + h * g15.nodes[i]);
    evals += 22;
    return {s7 * h, s15 * h};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           double machine_floor, const QuadratureOptions& opts, const GaussRule& g7,
           const GaussRule& g15, QuadratureResult& out) {
    const PanelEval pe = eval_panel(f, a, b, g7, g15, out.evaluations);
    const double err = std::abs(pe.fine - pe.coarse);
    // floors: refinement stops once a panel error reaches the roundoff level
    // of either the whole integral or the panel's own value
    const double accept = std::max({tol, machine_floor, 5e-15 * std::abs(pe.fine)});
    if (err <= accept || depth >= opts.max_depth ||
        out.evaluations > opts.max_evaluations) {
        out.value += pe.fine;
        out.error_estimate += err;
        if (err > accept) out.converged = false;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, machine_floor, opts, g7, g15, out);
    adapt(f, m, b, 0.5 * tol, depth + 1, machine_floor, opts, g7, g15, out);
}

} // namespace

const GaussRule& gauss_rule(int n) {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, make_gauss_rule(n)).first;
    return it->second;
}

double fixed_gauss(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& g = gauss_rule(n);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g.weights[i] * f(c + h * g.nodes[i]);
    return s * h;
}

QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                    QuadratureOptions opts) {
    QuadratureResult out;
    out.converged = true;
    if (a == b) return out;
    const GaussRule& g7 = gauss_rule(7);
    const GaussRule& g15 = gauss_rule(15);
    // First pass fixes the scale for the relative tolerance.
    const PanelEval whole = eval_panel(f, a, b, g7, g15, out.evaluations);
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(whole.fine));
    const double machine_floor = 1e-15 * std::abs(whole.fine);
    adapt(f, a, b, tol, 0, machine_floor, opts, g7, g15, out);
    return out;
}

double tensor_gauss4(const std::function<double(Vec2)>& f, const Rect& cell) {
    const GaussRule& g = gauss_rule(4);
    const double cx = 0.5 * (cell.xmin + cell.xmax), hx = 0.5 * cell.width();
    const double cy = 0.5 * (cell.ymin + cell.ymax), hy = 0.5 * cell.height();
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += g.weights[j] * f({cx + hx * g.nodes[i], cy + hy * g.nodes[j]});
        s += g.weights[i] * row;
    }
    return s * hx * hy;
}

} // namespace vortex
