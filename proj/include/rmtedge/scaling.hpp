#pragma once

#include <utility>

namespace rmtedge {

// The four rescaling families for Wishart extreme eigenvalues.
enum class Variant { Original, SecondOrder, LogLargest, LogSmallest };

const char* variant_name(Variant v);
Variant variant_from_name(const char* name);

struct ScalePair {
    double center = 0.0;
    double scale = 0.0;
    Variant variant = Variant::SecondOrder;
    int n = 0;
    int p = 0;
};

// Parameter bundle for the Liouville-Green change of variables:
// kappa = (n+N+1)/2, lambda = (n-N)/2, omega = 2*lambda/kappa,
// turning points xi_pm = 2 +- sqrt(4 - omega^2).
struct LgFrame {
    int n = 0;
    int N = 0;
    double kappa = 0.0;
    double lambda = 0.0;
    double omega = 0.0;
    double xi_minus = 0.0;
    double xi_plus = 0.0;
};

// mu_p = (sqrt(n-1)+sqrt(p))^2, sigma_p = (sqrt(n-1)+sqrt(p))(1/sqrt(n-1)+1/sqrt(p))^{1/3}.
ScalePair johnstone_constants(int n, int p);

// Half-integer-shifted pair: mu~ = (sqrt(n-1/2)+sqrt(p-1/2))^2 etc. Symmetric in n, p.
ScalePair second_order_constants(int n, int p);

// Log scale for the largest eigenvalue: center = log(mu~), scale = sigma~/mu~.
ScalePair log_constants(int n, int p);

// Smallest-eigenvalue log constants (requires n-1 >= p >= 1):
// mu- = (sqrt(n-1/2)-sqrt(p-1/2))^2, sigma- = (sqrt(n-1/2)-sqrt(p-1/2))(1/sqrt(p-1/2)-1/sqrt(n-1/2))^{1/3},
// scale = sigma-/mu-, center = log(mu-) + scale^2/8.
ScalePair smallest_log_constants(int n, int p);

// RMT-side pair with plus-half shifts: mu = (sqrt(n+1/2)+sqrt(N+1/2))^2,
// sigma = (sqrt(n+1/2)+sqrt(N+1/2))(1/sqrt(n+1/2)+1/sqrt(N+1/2))^{1/3}.
// Note rmt_constants(n-1, p-1) == second_order_constants(n, p).
ScalePair rmt_constants(int n, int N);

// Liouville-Green frame for n > N >= 1.
LgFrame lg_parameters(int n, int N);

// beta_N = (1/2) Int phi_tau, evaluated through the closed Gamma-ratio form
// in the log domain; tends to 1/sqrt(2) for even N. Odd N is rejected unless
// allow_odd is set, in which case the true value 0 is returned (the integral
// vanishes identically for odd N).
double beta_N(int n, int N, bool allow_odd = false);

// Delta_N = (mu_{n-1,N-1} - mu_{n-2,N}) / sigma_{n-2,N}; O(N^{-1/3}).
double delta_N(int n, int N);

// (rho_N, rho~_N), both 1 + O(1/N):
// rho_N  = N^{1/4} (n-1)^{1/4} sigma_{n-1,N-1}^{3/2} / mu_{n-1,N-1},
// rho~_N = N^{1/4} (n-1)^{1/4} sigma_{n-2,N}^{1/2} sigma_{n-1,N-1} / mu_{n-2,N}.
std::pair<double, double> rho_factors(int n, int N);

} // namespace rmtedge
