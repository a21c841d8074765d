#pragma once

#include <vector>

namespace rmtedge {

// Airy function value: Ai(x) together with Ai'(x).
struct AiryValue {
    double x;
    double ai;
    double ai_prime;
};

// Ai(x) and Ai'(x), absolute accuracy ~1e-12 on [-15, 20] (usable well
// beyond on both sides). Throws std::domain_error on non-finite input.
AiryValue airy(double x);

// log Gamma(x) for x > 0, relative error <= 1e-13 up to 1e6.
// Throws std::domain_error for x <= 0 or non-finite input.
double log_gamma(double x);

// Weighted Laguerre function
//   phi_k(x; alpha) = sqrt(k!/Gamma(k+alpha+1)) x^{alpha/2} e^{-x/2} L_k^alpha(x),
// orthonormal on L^2([0,inf)). Overflow-safe for k up to ~1e4 and
// x up to ~10(k+alpha) via a scaled three-term recurrence.
double laguerre_weighted(int k, double alpha, double x);

// phi_0..phi_kmax at a fixed point, sharing one recurrence pass.
std::vector<double> laguerre_weighted_seq(int kmax, double alpha, double x);

} // namespace rmtedge
