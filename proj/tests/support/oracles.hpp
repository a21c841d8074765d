#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: dense Jacobi eigensolver, Kolmogorov-Smirnov statistics, and a
// long-double Taylor march for the Airy equation.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

// Cyclic Jacobi eigenvalues of a dense symmetric matrix (row-major).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

// One-sample KS statistic against a CDF callable.
template <class Cdf>
double ks_one_sample(std::vector<double> draws, Cdf&& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (size_t i = 0; i < draws.size(); ++i) {
        const double f = cdf(draws[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic Kolmogorov critical value at level alpha for the one-sample
// statistic on n draws (two-sample: multiply by sqrt((m+n)/(m n)) instead).
inline double ks_critical(double alpha, double n) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(n);
}

inline double ks_critical_two(double alpha, double m, double n) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt((m + n) / (m * n));
}

// Long-double Taylor-series march for y'' = x y seeded at x = 0 with exact
// Ai(0), Ai'(0); independent forward route for overlap checks.
struct AiryMarch {
    long double y;
    long double yp;
};

inline AiryMarch airy_forward_march(double target) {
    // seed from the Maclaurin series at x = 2 to keep the number of steps in
    // the growing direction small
    constexpr long double ai0 = 0.3550280538878172392600631860041831763980L;
    constexpr long double aip0 = -0.2588194037928067984051835601892039634793L;
    long double seed_c[200];
    seed_c[0] = ai0;
    seed_c[1] = aip0;
    seed_c[2] = 0.0L;
    for (int m = 3; m < 200; ++m)
        seed_c[m] = seed_c[m - 3] / (static_cast<long double>(m) * (m - 1));
    long double x0 = 2.0L;
    AiryMarch v{0.0L, 0.0L};
    for (int m = 199; m >= 0; --m) {
        v.y = v.y * x0 + seed_c[m];
        if (m >= 1) v.yp = v.yp * x0 + m * seed_c[m];
    }
    auto step = [&](long double from, AiryMarch w, long double dh) {
        constexpr int kOrder = 36;
        long double c[kOrder + 1];
        c[0] = w.y;
        c[1] = w.yp;
        c[2] = from * c[0] / 2.0L;
        for (int k = 1; k + 2 <= kOrder; ++k)
            c[k + 2] = (from * c[k] + c[k - 1]) /
                       (static_cast<long double>(k + 2) * static_cast<long double>(k + 1));
        long double y = c[kOrder], yp = kOrder * c[kOrder];
        for (int k = kOrder - 1; k >= 0; --k) {
            y = y * dh + c[k];
            if (k >= 1) yp = yp * dh + k * c[k];
        }
        return AiryMarch{y, yp};
    };
    const long double h = target >= 2.0 ? 0.0625L : -0.0625L;
    while (std::abs(static_cast<double>(x0) - target) > 0.0625) {
        v = step(x0, v, h);
        x0 += h;
    }
    v = step(x0, v, static_cast<long double>(target) - x0);
    return v;
}

} // namespace oracles
