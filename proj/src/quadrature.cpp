#include "rmtedge/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rmtedge {

namespace {

std::vector<std::pair<double, double>> compute_gl_rule(int order) {
    // Newton iteration on P_n, nodes seeded by the Chebyshev-like estimate.
    std::vector<std::pair<double, double>> rule(static_cast<size_t>(order));
    const int n = order;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule[static_cast<size_t>(i)] = {-x, w};
        rule[static_cast<size_t>(n - 1 - i)] = {x, w};
    }
    if (n % 2 == 1) rule[static_cast<size_t>(n / 2)].first = 0.0;
    return rule;
}

} // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_rule(int order) {
    if (order < 1) throw std::domain_error("gauss_legendre_rule: order >= 1 required");
    static std::mutex mtx;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl_rule(order)).first;
    return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int order) {
    const auto& rule = gauss_legendre_rule(order);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (const auto& [x, w] : rule) sum += w * f(c + h * x);
    return h * sum;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b, double whole,
                    double abs_tol, int depth, int max_depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl_integrate(f, a, mid, 21);
    const double right = gl_integrate(f, mid, b, 21);
    const double err = std::abs(left + right - whole);
    if (err < abs_tol || depth >= max_depth) {
        if (depth >= max_depth && err > 64.0 * abs_tol)
            throw std::runtime_error("integrate_adaptive: failed to converge");
        return left + right;
    }
    return adaptive_rec(f, a, mid, left, 0.5 * abs_tol, depth + 1, max_depth) +
           adaptive_rec(f, mid, b, right, 0.5 * abs_tol, depth + 1, max_depth);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return adaptive_rec(f, a, b, gl_integrate(f, a, b, 21), abs_tol, 0, max_depth);
}

double integrate_to_decay(const std::function<double(double)>& f, double a, double panel_width,
                          double tail_tol, int max_panels) {
    if (!(panel_width > 0.0)) throw std::domain_error("integrate_to_decay: panel_width > 0 required");
    double sum = 0.0;
    int quiet = 0;
    for (int i = 0; i < max_panels; ++i) {
        const double lo = a + i * panel_width;
        const double piece = gl_integrate(f, lo, lo + panel_width, 32);
        sum += piece;
        if (std::abs(piece) < tail_tol * std::max(1.0, std::abs(sum))) {
            if (++quiet >= 2) return sum;
        } else {
            quiet = 0;
        }
    }
    throw std::runtime_error("integrate_to_decay: integrand did not decay within the panel budget");
}

double fredholm_det(const std::function<double(double, double)>& kernel, double a, double b, int m) {
    const auto& rule = gauss_legendre_rule(m);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::vector<double> x(static_cast<size_t>(m)), sw(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        x[static_cast<size_t>(i)] = c + h * rule[static_cast<size_t>(i)].first;
        sw[static_cast<size_t>(i)] = std::sqrt(h * rule[static_cast<size_t>(i)].second);
    }
    std::vector<double> mat(static_cast<size_t>(m) * static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double kij = kernel(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)]);
            double v = -sw[static_cast<size_t>(i)] * sw[static_cast<size_t>(j)] * kij;
            if (i == j) v += 1.0;
            mat[static_cast<size_t>(i) * m + j] = v;
        }
    }
    // LU with partial pivoting; determinant = sign * prod(pivots)
    double det = 1.0;
    for (int k = 0; k < m; ++k) {
        int piv = k;
        double best = std::abs(mat[static_cast<size_t>(k) * m + k]);
        for (int i = k + 1; i < m; ++i) {
            const double v = std::abs(mat[static_cast<size_t>(i) * m + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < m; ++j)
                std::swap(mat[static_cast<size_t>(piv) * m + j], mat[static_cast<size_t>(k) * m + j]);
            det = -det;
        }
        const double pivot = mat[static_cast<size_t>(k) * m + k];
        det *= pivot;
        for (int i = k + 1; i < m; ++i) {
            const double factor = mat[static_cast<size_t>(i) * m + k] / pivot;
            if (factor == 0.0) continue;
            for (int j = k + 1; j < m; ++j)
                mat[static_cast<size_t>(i) * m + j] -= factor * mat[static_cast<size_t>(k) * m + j];
        }
    }
    return det;
}

} // namespace rmtedge
