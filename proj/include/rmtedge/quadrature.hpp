#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace rmtedge {

// Gauss-Legendre nodes and weights on [-1, 1] (cached per order).
const std::vector<std::pair<double, double>>& gauss_legendre_rule(int order);

// Single-panel Gauss-Legendre on [a, b].
double gl_integrate(const std::function<double(double)>& f, double a, double b, int order = 32);

// Adaptive bisection with a GL(order) error estimate against the two halves.
// Throws std::runtime_error when the subdivision budget is exhausted.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 40);

// Semi-infinite integral: panels of the given width from a, stopping when a
// panel contributes less than tail_tol * max(1, |sum|) twice in a row.
double integrate_to_decay(const std::function<double(double)>& f, double a, double panel_width,
                          double tail_tol = 1e-15, int max_panels = 4000);

// det(I - K) for the integral operator with the given kernel on [a, b],
// square-root-weighted Nystrom discretization with m Gauss-Legendre nodes.
double fredholm_det(const std::function<double(double, double)>& kernel, double a, double b, int m);

} // namespace rmtedge
