#include "rmtedge/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmtedge {

namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
constexpr long double kAi0 = 0.3550280538878172392600631860041831763980L;
constexpr long double kAip0 = -0.2588194037928067984051835601892039634793L;

struct Pair {
    long double y;
    long double yp;
};

// One Taylor step of y'' = x y from x0 to x0 + h. Coefficients follow
// (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}.
Pair taylor_step(long double x0, Pair v, long double h) {
    constexpr int kOrder = 34;
    long double c[kOrder + 1];
    c[0] = v.y;
    c[1] = v.yp;
    c[2] = x0 * c[0] / 2.0L;
    for (int k = 1; k + 2 <= kOrder; ++k) {
        c[k + 2] = (x0 * c[k] + c[k - 1]) /
                   (static_cast<long double>(k + 2) * static_cast<long double>(k + 1));
    }
    long double y = c[kOrder];
    long double yp = kOrder * c[kOrder];
    for (int k = kOrder - 1; k >= 0; --k) {
        y = y * h + c[k];
        if (k >= 1) yp = yp * h + k * c[k];
    }
    return {y, yp};
}

// Maclaurin series about 0, adequate for |x| <= 2.
Pair maclaurin(long double x) {
    constexpr int kOrder = 66;
    long double c[kOrder + 1];
    c[0] = kAi0;
    c[1] = kAip0;
    c[2] = 0.0L;
    for (int m = 3; m <= kOrder; ++m) {
        c[m] = c[m - 3] / (static_cast<long double>(m) * (m - 1));
    }
    long double y = c[kOrder];
    long double yp = kOrder * c[kOrder];
    for (int m = kOrder - 1; m >= 0; --m) {
        y = y * x + c[m];
        if (m >= 1) yp = yp * x + m * c[m];
    }
    return {y, yp};
}

// Asymptotic expansion for x >= 8 (Olver): Ai(x) ~ e^{-z}/(2 sqrt(pi) x^{1/4}) sum (-1)^k u_k z^{-k}
// with z = (2/3) x^{3/2}; Ai'(x) carries the v_k = -u_k (6k+1)/(6k-1) series.
Pair asym_pos(long double x) {
    const long double z = 2.0L / 3.0L * x * std::sqrt(x);
    long double u = 1.0L, su = 1.0L, sv = 1.0L;
    long double zk = 1.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 1; k <= 40; ++k) {
        u *= (6.0L * k - 5.0L) * (6.0L * k - 3.0L) * (6.0L * k - 1.0L) /
             (216.0L * k * (2.0L * k - 1.0L));
        zk /= -z;
        const long double term = u * zk;
        if (std::abs(term) > prev) break; // divergence onset
        prev = std::abs(term);
        su += term;
        sv += term * (6.0L * k + 1.0L) / (1.0L - 6.0L * k);
        if (std::abs(term) < 1e-20L) break;
    }
    const long double spi2 = 2.0L * std::sqrt(3.14159265358979323846264338327950288L);
    const long double x14 = std::pow(x, 0.25L);
    const long double e = std::exp(-z);
    return {e / (spi2 * x14) * su, -x14 * e / spi2 * sv};
}

constexpr double kStep = 0.25;
constexpr double kSeriesEdge = 1.5;
constexpr double kAsymEdge = 8.0;
constexpr double kLeftEnd = -40.0;

struct AiryCache {
    // nodes at kAsymEdge - i*kStep down to kSeriesEdge
    std::vector<Pair> mid;
    // nodes at -kSeriesEdge - i*kStep down to kLeftEnd
    std::vector<Pair> neg;

    AiryCache() {
        Pair v = asym_pos(kAsymEdge);
        mid.push_back(v);
        const int nmid = static_cast<int>(std::lround((kAsymEdge - kSeriesEdge) / kStep));
        for (int i = 0; i < nmid; ++i) {
            const long double x0 = kAsymEdge - i * kStep;
            v = taylor_step(x0, v, -static_cast<long double>(kStep));
            mid.push_back(v);
        }
        v = maclaurin(-static_cast<long double>(kSeriesEdge));
        neg.push_back(v);
        const int nneg = static_cast<int>(std::lround((-kSeriesEdge - kLeftEnd) / kStep));
        for (int i = 0; i < nneg; ++i) {
            const long double x0 = -kSeriesEdge - i * kStep;
            v = taylor_step(x0, v, -static_cast<long double>(kStep));
            neg.push_back(v);
        }
    }
};

const AiryCache& airy_cache() {
    static const AiryCache cache;
    return cache;
}

} // namespace

AiryValue airy(double x) {
    if (!std::isfinite(x)) throw std::domain_error("airy: non-finite argument");
    Pair v;
    if (x >= kAsymEdge) {
        v = asym_pos(x);
    } else if (x >= kSeriesEdge) {
        // step down from the nearest cached node above x (stable direction)
        const auto& c = airy_cache();
        const int i = static_cast<int>(std::floor((kAsymEdge - x) / kStep));
        const long double x0 = kAsymEdge - i * kStep;
        v = taylor_step(x0, c.mid[static_cast<size_t>(i)], x - x0);
    } else if (x > -kSeriesEdge) {
        v = maclaurin(x);
    } else if (x >= kLeftEnd) {
        const auto& c = airy_cache();
        const int i = static_cast<int>(std::lround((-kSeriesEdge - x) / kStep));
        const long double x0 = -kSeriesEdge - i * kStep;
        v = taylor_step(x0, c.neg[static_cast<size_t>(i)], x - x0);
    } else {
        // walk further left on demand; oscillatory region, no stiffness
        const auto& c = airy_cache();
        long double x0 = kLeftEnd;
        v = c.neg.back();
        while (x0 - x > kStep) {
            v = taylor_step(x0, v, -static_cast<long double>(kStep));
            x0 -= kStep;
        }
        v = taylor_step(x0, v, x - x0);
    }
    return {x, static_cast<double>(v.y), static_cast<double>(v.yp)};
}

double log_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) throw std::domain_error("log_gamma: requires x > 0");
    // Stirling series with Bernoulli corrections, valid for z >= 12;
    // smaller arguments shifted up through the recurrence.
    double shift = 0.0;
    double z = x;
    while (z < 12.0) {
        shift += std::log(z);
        z += 1.0;
    }
    static const double c[7] = {
        1.0 / 12.0,    -1.0 / 360.0,      1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,  -691.0 / 360360.0, 7.0 / 1560.0,
    };
    const double zi = 1.0 / z;
    const double zi2 = zi * zi;
    double corr = 0.0;
    double p = zi;
    for (int k = 0; k < 7; ++k) {
        corr += c[k] * p;
        p *= zi2;
    }
    constexpr double half_log_2pi = 0.91893853320467274178032973640562;
    return (z - 0.5) * std::log(z) - z + half_log_2pi + corr - shift;
}

namespace {

void check_laguerre_args(int k, double alpha, double x) {
    if (k < 0) throw std::domain_error("laguerre_weighted: requires k >= 0");
    if (!(alpha > -1.0)) throw std::domain_error("laguerre_weighted: requires alpha > -1");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("laguerre_weighted: requires x >= 0");
}

// Shared scaled recurrence: calls sink(j, value) for j = 0..kmax.
template <class Sink>
void laguerre_recurrence(int kmax, double alpha, double x, Sink&& sink) {
    if (x == 0.0) {
        // phi_k(0; alpha): 0 for alpha > 0, binomial value at alpha = 0, +inf for alpha < 0
        for (int j = 0; j <= kmax; ++j) {
            double v;
            if (alpha > 0.0) v = 0.0;
            else if (alpha == 0.0) v = 1.0; // sqrt(k!/k!) L_k^0(0) = 1
            else v = std::numeric_limits<double>::infinity();
            sink(j, v);
        }
        return;
    }
    // value of phi_j = mantissa * exp(log_scale); mantissas rescaled by powers of 2
    double log_scale = 0.5 * alpha * std::log(x) - 0.5 * x - 0.5 * log_gamma(alpha + 1.0);
    double prev = 0.0;
    double cur = 1.0;
    auto emit = [&](int j, double m) {
        const double lg = log_scale + (m != 0.0 ? std::log(std::abs(m)) : -INFINITY);
        double v = 0.0;
        if (lg > -745.0) v = std::copysign(std::exp(lg), m);
        sink(j, v);
    };
    emit(0, cur);
    double bj = 0.0; // sqrt(j (j+alpha))
    for (int j = 0; j < kmax; ++j) {
        const double bj1 = std::sqrt((j + 1.0) * (j + 1.0 + alpha));
        const double next = ((2.0 * j + alpha + 1.0 - x) * cur - bj * prev) / bj1;
        prev = cur;
        cur = next;
        bj = bj1;
        const double mag = std::max(std::abs(prev), std::abs(cur));
        if (mag > 1e140 || (mag < 1e-140 && mag > 0.0)) {
            const int e = std::ilogb(mag);
            const double f = std::ldexp(1.0, -e);
            prev *= f;
            cur *= f;
            log_scale += e * 0.6931471805599453094172321214581766;
        }
        emit(j + 1, cur);
    }
}

} // namespace

double laguerre_weighted(int k, double alpha, double x) {
    check_laguerre_args(k, alpha, x);
    double out = 0.0;
    laguerre_recurrence(k, alpha, x, [&](int j, double v) {
        if (j == k) out = v;
    });
    return out;
}

std::vector<double> laguerre_weighted_seq(int kmax, double alpha, double x) {
    check_laguerre_args(kmax, alpha, x);
    std::vector<double> out(static_cast<size_t>(kmax) + 1);
    laguerre_recurrence(kmax, alpha, x, [&](int j, double v) {
        out[static_cast<size_t>(j)] = v;
    });
    return out;
}

} // namespace rmtedge
