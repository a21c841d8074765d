#include "rmtedge/lgasym.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmtedge/quadrature.hpp"
#include "rmtedge/specfun.hpp"

namespace rmtedge {

namespace {

void require_frame(int n, int N) {
    if (N < 1 || n <= N) throw std::domain_error("lgasym: requires n > N >= 1");
}

} // namespace

double f_direct(int n, int N, double x) {
    require_frame(n, N);
    if (!(x >= 0.0)) throw std::domain_error("f_direct: requires x >= 0");
    const double sigma = rmt_constants(n, N).scale;
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sqrt(x / sigma) * laguerre_weighted(N, static_cast<double>(n - N), x);
}

double zeta_of_xi(const LgFrame& frame, double xi) {
    if (!(xi > frame.xi_minus))
        throw std::domain_error("zeta_of_xi: xi <= xi_minus (lower turning point out of scope)");
    const double xp = frame.xi_plus;
    const double delta = frame.xi_plus - frame.xi_minus;
    if (xi == xp) return 0.0;
    const bool right = xi > xp;
    const double span = right ? xi - xp : xp - xi;
    const double cap = std::sqrt(span);
    // substitution t = xi+ +- u^2 removes the sqrt endpoint singularity
    auto integrand = right
        ? std::function<double(double)>([xp, delta](double u) {
              const double u2 = u * u;
              return u2 * std::sqrt(u2 + delta) / (xp + u2);
          })
        : std::function<double(double)>([xp, delta](double u) {
              const double u2 = u * u;
              return u2 * std::sqrt(delta - u2) / (xp - u2);
          });
    const int panels = std::max(1, static_cast<int>(std::ceil(cap / 0.25)));
    double integral = 0.0;
    const double w = cap / panels;
    for (int i = 0; i < panels; ++i)
        integral += gl_integrate(integrand, i * w, (i + 1) * w, 64);
    const double mag = std::pow(1.5 * integral, 2.0 / 3.0);
    return right ? mag : -mag;
}

double zeta_dot_turning(const LgFrame& frame) {
    const double np = frame.n + 0.5, Np = frame.N + 0.5;
    return std::pow(np * Np, 1.0 / 6.0) * std::cbrt(np + Np) /
           (std::cbrt(2.0) * std::pow(std::sqrt(np) + std::sqrt(Np), 4.0 / 3.0));
}

double zeta_dot(const LgFrame& frame, double xi) {
    if (std::abs(xi - frame.xi_plus) <= 1e-7 * std::max(1.0, frame.xi_plus))
        return zeta_dot_turning(frame);
    const double f = (xi - frame.xi_minus) * (xi - frame.xi_plus) / (4.0 * xi * xi);
    const double z = zeta_of_xi(frame, xi);
    return std::sqrt(f / z); // f and zeta share their sign away from the turning point
}

double r_N_factor(int n, int N) {
    if (n < 1 || N < 1) throw std::domain_error("r_N_factor: requires n, N >= 1");
    const double np = n + 0.5, Np = N + 0.5;
    const double log_r2 = std::log(2.0 * M_PI) - (np + Np) + np * std::log(np) + Np * std::log(Np) -
                          log_gamma(N + 1.0) - log_gamma(n + 1.0);
    return std::exp(0.5 * log_r2);
}

double lg_approx(int n, int N, double x) {
    require_frame(n, N);
    const LgFrame frame = lg_parameters(n, N);
    const double xi = x / frame.kappa;
    const double zeta = zeta_of_xi(frame, xi);
    const double R = std::sqrt(zeta_dot_turning(frame) / zeta_dot(frame, xi));
    const double arg = std::pow(frame.kappa, 2.0 / 3.0) * zeta;
    return r_N_factor(n, N) * R * airy(arg).ai;
}

LgEvaluation lg_evaluate(int n, int N, double s) {
    const ScalePair c = rmt_constants(n, N);
    const LgFrame frame = lg_parameters(n, N);
    LgEvaluation e;
    e.n = n;
    e.N = N;
    e.s = s;
    e.x = c.center + c.scale * s;
    e.xi = e.x / frame.kappa;
    e.zeta = zeta_of_xi(frame, e.xi);
    e.direct = f_direct(n, N, e.x);
    e.approx = lg_approx(n, N, e.x);
    e.abs_err = std::abs(e.direct - e.approx);
    return e;
}

std::pair<double, double> phi_psi_point(int n, int N, double x) {
    require_frame(n, N);
    if (n - N < 2) throw std::domain_error("phi_psi_point: requires n - N >= 2 (Laguerre parameter domain)");
    if (!(x > 0.0)) throw std::domain_error("phi_psi_point: requires x > 0");
    const double alpha = static_cast<double>(n - N);
    const double pref = std::sqrt(0.5 * std::sqrt(static_cast<double>(N) * (n - 1.0)));
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    const double rx = std::sqrt(x);
    const double phi = sign * pref * laguerre_weighted(N, alpha - 2.0, x) / rx;
    const double psi = -sign * pref * laguerre_weighted(N - 1, alpha, x) / rx;
    return {phi, psi};
}

double phi_tau(int n, int N, double s) {
    const ScalePair c = second_order_constants(n, N);
    const double x = c.center + c.scale * s;
    if (x <= 0.0) return 0.0;
    return c.scale * phi_psi_point(n, N, x).first;
}

double psi_tau(int n, int N, double s) {
    const ScalePair c = second_order_constants(n, N);
    const double x = c.center + c.scale * s;
    if (x <= 0.0) return 0.0;
    return c.scale * phi_psi_point(n, N, x).second;
}

LemmaProfile lemma_error_profile(int n, int N, const std::vector<double>& s_grid) {
    if (N < 2 || n <= N || n - N < 2 || N % 2 != 0)
        throw std::domain_error("lemma_error_profile: requires n > N >= 2, n - N >= 2, N even");
    if (s_grid.empty()) throw std::domain_error("lemma_error_profile: empty grid");
    for (const double s : s_grid) {
        if (!(s >= -4.0 - 1e-9 && s <= 4.0 + 1e-9))
            throw std::domain_error("lemma_error_profile: grid must lie in [-4, 4]");
    }
    const double dN = delta_N(n, N);
    LemmaProfile prof;
    for (const double s : s_grid) {
        const double h = 1e-5 * std::max(1.0, std::abs(s));
        const double w = std::exp(s);
        const AiryValue a = airy(s);
        const double g = a.ai / std::sqrt(2.0);
        const double gp = a.ai_prime / std::sqrt(2.0);
        const double gpp = s * g; // Ai'' = s Ai
        const double psi0 = psi_tau(n, N, s);
        const double dpsi = (psi_tau(n, N, s + h) - psi_tau(n, N, s - h)) / (2.0 * h);
        const double phi0 = phi_tau(n, N, s);
        const double dphi = (phi_tau(n, N, s + h) - phi_tau(n, N, s - h)) / (2.0 * h);
        prof.sup_psi = std::max(prof.sup_psi, w * std::abs(psi0 - g));
        prof.sup_dpsi = std::max(prof.sup_dpsi, w * std::abs(dpsi - gp));
        prof.sup_phi = std::max(prof.sup_phi, w * std::abs(phi0 - g - dN * gp));
        prof.sup_dphi = std::max(prof.sup_dphi, w * std::abs(dphi - gp - dN * gpp));
    }
    return prof;
}

double s2_kernel(int n, int N, double x, double y) {
    require_frame(n, N);
    if (!(x > 0.0 && y > 0.0)) throw std::domain_error("s2_kernel: requires x, y > 0");
    const double width = std::max(1.0, second_order_constants(n, N).scale);
    auto integrand = [&](double z) {
        const auto [px, qx] = phi_psi_point(n, N, x + z);
        const auto [py, qy] = phi_psi_point(n, N, y + z);
        return px * qy + qx * py;
    };
    return integrate_to_decay(integrand, 0.0, width, 1e-15, 2000);
}

double s1_kernel_central(int n, int N, double x, double y) {
    if (N % 2 != 0) throw std::domain_error("s1_kernel_central: requires N even");
    const double width = std::max(1.0, second_order_constants(n, N).scale);
    const double tail = integrate_to_decay(
        [&](double z) { return phi_psi_point(n, N, z).first; }, y, width, 1e-15, 2000);
    const double eps_phi = beta_N(n, N) - tail;
    return s2_kernel(n, N, x, y) + phi_psi_point(n, N, x).second * eps_phi;
}

double s1_kernel_alt(int n, int N, double x, double y) {
    require_frame(n, N);
    if (N < 2 || n - N < 2) throw std::domain_error("s1_kernel_alt: requires N >= 2, n - N >= 2");
    if (!(x > 0.0 && y > 0.0)) throw std::domain_error("s1_kernel_alt: requires x, y > 0");
    const double alpha = static_cast<double>(n - N);
    // S_{N-1,2}(x, y; alpha_N) as the Christoffel-Darboux sum
    const std::vector<double> fx = laguerre_weighted_seq(std::max(0, N - 2), alpha, x);
    const std::vector<double> fy = laguerre_weighted_seq(std::max(0, N - 2), alpha, y);
    double cd = 0.0;
    for (int k = 0; k <= N - 2; ++k) cd += fx[static_cast<size_t>(k)] * fy[static_cast<size_t>(k)];
    const double sign_bar_n1 = ((N - 1) % 2 == 0) ? 1.0 : -1.0;
    const double phibar_n1 = sign_bar_n1 * laguerre_weighted(N - 1, alpha, x) / std::sqrt(x);
    const double sign_bar_n2 = (N % 2 == 0) ? 1.0 : -1.0;
    auto phibar_n2 = [&](double z) {
        return sign_bar_n2 * laguerre_weighted(N - 2, alpha, z) / std::sqrt(z);
    };
    const double width = std::max(1.0, second_order_constants(n, N).scale);
    const double left = integrate_adaptive(phibar_n2, 0.0, y, 1e-12);
    const double right = integrate_to_decay(phibar_n2, y, width, 1e-15, 2000);
    const double eps_bar = 0.5 * (left - right);
    const double a_N = std::sqrt(static_cast<double>(N) * (n - 1.0));
    return std::sqrt(y / x) * cd +
           std::sqrt((N - 1.0) / N) * 0.5 * a_N * phibar_n1 * eps_bar;
}

double lue_largest_cdf(int n, int N, double x_cut, int m) {
    require_frame(n, N);
    if (!(x_cut > 0.0)) throw std::domain_error("lue_largest_cdf: requires x_cut > 0");
    if (m < 8) throw std::domain_error("lue_largest_cdf: requires m >= 8");
    const double alpha = static_cast<double>(n - N);
    const double sigma = rmt_constants(n, N).scale;
    const double hi = x_cut + 14.0 * sigma;
    auto kernel = [&](double x, double y) {
        const std::vector<double> fx = laguerre_weighted_seq(N - 1, alpha, x);
        const std::vector<double> fy = laguerre_weighted_seq(N - 1, alpha, y);
        double sum = 0.0;
        for (int k = 0; k < N; ++k) sum += fx[static_cast<size_t>(k)] * fy[static_cast<size_t>(k)];
        return sum;
    };
    const double coarse = fredholm_det(kernel, x_cut, hi, m);
    const double fine = fredholm_det(kernel, x_cut, hi, 2 * m);
    if (std::abs(coarse - fine) > 1e-4)
        throw std::runtime_error("lue_largest_cdf: Nystrom determinant not converged under m-doubling");
    return std::clamp(fine, 0.0, 1.0);
}

double kappa_zeta_taylor_check(int n, int N, const std::vector<double>& s_grid) {
    require_frame(n, N);
    if (s_grid.empty()) throw std::domain_error("kappa_zeta_taylor_check: empty grid");
    const double s_cap = std::pow(static_cast<double>(N), 1.0 / 6.0);
    const ScalePair c = rmt_constants(n, N);
    const LgFrame frame = lg_parameters(n, N);
    const double k23 = std::pow(frame.kappa, 2.0 / 3.0);
    const double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
    double sup = 0.0;
    for (const double s : s_grid) {
        if (!(s >= 0.0 && s <= s_cap + 1e-9))
            throw std::domain_error("kappa_zeta_taylor_check: grid must lie in [0, N^{1/6}]");
        const double xi = (c.center + c.scale * s) / frame.kappa;
        const double z = zeta_of_xi(frame, xi);
        sup = std::max(sup, n23 * std::abs(k23 * z - s) / std::max(s * s, 1.0));
    }
    return sup;
}

} // namespace rmtedge
