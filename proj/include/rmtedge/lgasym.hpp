#pragma once

#include <utility>
#include <vector>

#include "rmtedge/scaling.hpp"

namespace rmtedge {

// One soft-edge evaluation point: the weighted Laguerre function by direct
// recurrence next to its Liouville-Green/Airy approximation.
struct LgEvaluation {
    int n = 0;
    int N = 0;
    double s = 0.0;
    double x = 0.0;
    double xi = 0.0;
    double zeta = 0.0;
    double direct = 0.0;
    double approx = 0.0;
    double abs_err = 0.0;
};

// F_{n,N}(x) = (-1)^N sigma_{n,N}^{-1/2} sqrt(N!/n!) x^{(alpha+1)/2} e^{-x/2} L_N^alpha(x),
// alpha = n - N; overflow-safe. Requires n > N >= 1, x >= 0.
double f_direct(int n, int N, double x);

// Liouville-Green variable: (2/3) zeta^{3/2} = Int_{xi+}^{xi} sqrt(f) for
// xi >= xi+ and (2/3)(-zeta)^{3/2} = Int_{xi}^{xi+} sqrt(-f) for xi <= xi+,
// f = (xi - xi-)(xi - xi+)/(4 xi^2). Rejects xi <= xi- (lower turning point
// region is out of scope).
double zeta_of_xi(const LgFrame& frame, double xi);

// dzeta/dxi = sqrt(f/zeta); closed form at the turning point.
double zeta_dot(const LgFrame& frame, double xi);
double zeta_dot_turning(const LgFrame& frame);

// r_N^2 = 2 pi e^{-(n+ + N+)} n+^{n+} N+^{N+} / (N! n!), log-domain.
double r_N_factor(int n, int N);

// Principal Liouville-Green term r_N R_N(xi) Ai(kappa^{2/3} zeta).
double lg_approx(int n, int N, double x);

// Direct and approximate values at x = mu_{n,N} + sigma_{n,N} s.
LgEvaluation lg_evaluate(int n, int N, double s);

// (phi, psi) at x for the LOE/LUE pair with parameter alpha_N - 1:
// phi = (-1)^N sqrt(a_N/2) phi_N(x; alpha_N - 2) / sqrt(x),
// psi = (-1)^{N-1} sqrt(a_N/2) phi_{N-1}(x; alpha_N) / sqrt(x),
// a_N = sqrt(N (n-1)). Requires n - N >= 2, x > 0.
std::pair<double, double> phi_psi_point(int n, int N, double x);

// tau-scaled versions on the s axis (zero when mu~ + sigma~ s < 0).
double phi_tau(int n, int N, double s);
double psi_tau(int n, int N, double s);

// Suprema over the grid of e^s-weighted Airy-approximation errors:
// |psi_tau - G|, |psi_tau' - G'|, |phi_tau - G - Delta_N G'|,
// |phi_tau' - G' - Delta_N G''| with G = Ai/sqrt(2). Each supremum scaled by
// N^{2/3} should stay bounded along an N-ladder.
struct LemmaProfile {
    double sup_psi = 0.0;
    double sup_dpsi = 0.0;
    double sup_phi = 0.0;
    double sup_dphi = 0.0;
};
LemmaProfile lemma_error_profile(int n, int N, const std::vector<double>& s_grid);

// LUE correlation kernel with parameter alpha_N - 1 through the integral
// representation S(x,y) = Int_0^inf phi(x+z) psi(y+z) + psi(x+z) phi(y+z) dz.
double s2_kernel(int n, int N, double x, double y);

// LOE kernel, central formula: S_{N,1} = S_{N,2} + psi(x) (eps phi)(y) with
// (eps phi)(y) = beta_N - Int_y^inf phi. Requires N even, n - N >= 2.
double s1_kernel_central(int n, int N, double x, double y);

// LOE kernel through the alternative representation:
// sqrt(y/x) S_{N-1,2}(x,y; alpha_N)
//   + sqrt((N-1)/N) (a_N/2) phibar_{N-1}(x; alpha_N) (eps phibar_{N-2})(y; alpha_N).
double s1_kernel_alt(int n, int N, double x, double y);

// P{largest LUE eigenvalue <= x_cut} for the beta = 2 ensemble matching a
// complex white Wishart with (n, N): Nystrom Fredholm determinant on
// [x_cut, x_cut + 14 sigma], convergence checked by m-doubling.
double lue_largest_cdf(int n, int N, double x_cut, int m = 48);

// sup over the grid of N^{2/3} |kappa^{2/3} zeta(xi(s)) - s| / max(s^2, 1),
// xi(s) = (mu_{n,N} + sigma_{n,N} s)/kappa_N; grid must lie in [0, N^{1/6}].
double kappa_zeta_taylor_check(int n, int N, const std::vector<double>& s_grid);

} // namespace rmtedge
