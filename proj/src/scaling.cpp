#include "rmtedge/scaling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rmtedge/specfun.hpp"

namespace rmtedge {

namespace {

// (center, scale) for edge constants built from effective degrees (a, b):
// center = (sqrt(a)+sqrt(b))^2, scale = (sqrt(a)+sqrt(b))(1/sqrt(a)+1/sqrt(b))^{1/3}.
std::pair<double, double> edge_pair(double a, double b) {
    const double sa = std::sqrt(a), sb = std::sqrt(b);
    const double s = sa + sb;
    return {s * s, s * std::cbrt(1.0 / sa + 1.0 / sb)};
}

} // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Original: return "orig";
        case Variant::SecondOrder: return "second";
        case Variant::LogLargest: return "log";
        case Variant::LogSmallest: return "small-log";
    }
    return "?";
}

Variant variant_from_name(const char* name) {
    const std::string s(name);
    if (s == "orig") return Variant::Original;
    if (s == "second") return Variant::SecondOrder;
    if (s == "log") return Variant::LogLargest;
    if (s == "small-log") return Variant::LogSmallest;
    throw std::invalid_argument("unknown variant '" + s + "' (expected orig|second|log|small-log)");
}

ScalePair johnstone_constants(int n, int p) {
    if (n < 2 || p < 1) throw std::domain_error("johnstone_constants: requires n >= 2, p >= 1");
    const auto [c, s] = edge_pair(n - 1.0, static_cast<double>(p));
    return {c, s, Variant::Original, n, p};
}

ScalePair second_order_constants(int n, int p) {
    if (n < 1 || p < 1) throw std::domain_error("second_order_constants: requires n, p >= 1");
    const auto [c, s] = edge_pair(n - 0.5, p - 0.5);
    return {c, s, Variant::SecondOrder, n, p};
}

ScalePair log_constants(int n, int p) {
    const ScalePair so = second_order_constants(n, p);
    return {std::log(so.center), so.scale / so.center, Variant::LogLargest, n, p};
}

ScalePair smallest_log_constants(int n, int p) {
    if (p < 1 || n - 1 < p) throw std::domain_error("smallest_log_constants: requires n - 1 >= p >= 1");
    const double sa = std::sqrt(n - 0.5), sb = std::sqrt(p - 0.5);
    const double d = sa - sb;
    const double mu = d * d;
    const double sigma = d * std::cbrt(1.0 / sb - 1.0 / sa);
    const double tau = sigma / mu;
    return {std::log(mu) + tau * tau / 8.0, tau, Variant::LogSmallest, n, p};
}

ScalePair rmt_constants(int n, int N) {
    if (n < 1 || N < 1) throw std::domain_error("rmt_constants: requires n, N >= 1");
    const auto [c, s] = edge_pair(n + 0.5, N + 0.5);
    return {c, s, Variant::SecondOrder, n, N};
}

LgFrame lg_parameters(int n, int N) {
    if (N < 1 || n <= N) throw std::domain_error("lg_parameters: requires n > N >= 1");
    LgFrame f;
    f.n = n;
    f.N = N;
    f.kappa = 0.5 * (n + N + 1.0);
    f.lambda = 0.5 * (n - N);
    f.omega = 2.0 * f.lambda / f.kappa;
    // 4 - omega^2 = 4 (n+1/2)(N+1/2) / kappa^2 exactly
    const double root = 2.0 * std::sqrt((n + 0.5) * (N + 0.5)) / f.kappa;
    f.xi_plus = 2.0 + root;
    f.xi_minus = f.omega * f.omega / f.xi_plus; // stable for omega -> 0
    return f;
}

double beta_N(int n, int N, bool allow_odd) {
    if (N < 2 || n <= N) throw std::domain_error("beta_N: requires n > N >= 2");
    if (N % 2 != 0 && !allow_odd)
        throw std::domain_error("beta_N: N must be even (Int psi_tau = 0 identity); override with allow_odd");
    // (1/2) Int phi_tau vanishes identically for odd N (the 2F1(-N,b;2b;2)
    // factor in the closed form is zero there)
    if (N % 2 != 0) return 0.0;
    const double alpha = static_cast<double>(n - N);
    const double log_beta = -0.5 * alpha * std::log(2.0) + 0.25 * std::log(static_cast<double>(N)) +
                            0.25 * std::log(n - 1.0) + 0.5 * (log_gamma(n - 1.0) - log_gamma(N + 1.0)) +
                            log_gamma(0.5 * (N + 1.0)) - log_gamma(0.5 * n);
    return std::exp(log_beta);
}

double delta_N(int n, int N) {
    if (n < 3 || N < 2) throw std::domain_error("delta_N: requires n >= 3, N >= 2");
    const ScalePair a = rmt_constants(n - 1, N - 1);
    const ScalePair b = rmt_constants(n - 2, N);
    return (a.center - b.center) / b.scale;
}

std::pair<double, double> rho_factors(int n, int N) {
    if (n < 3 || N < 2) throw std::domain_error("rho_factors: requires n >= 3, N >= 2");
    const ScalePair a = rmt_constants(n - 1, N - 1); // (mu~, sigma~)
    const ScalePair b = rmt_constants(n - 2, N);
    const double pref = std::pow(static_cast<double>(N) * (n - 1.0), 0.25);
    const double rho = pref * a.scale * std::sqrt(a.scale) / a.center;
    const double rho_t = pref * std::sqrt(b.scale) * a.scale / b.center;
    return {rho, rho_t};
}

} // namespace rmtedge
