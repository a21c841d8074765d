#include "rmtedge/twlimit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "rmtedge/quadrature.hpp"
#include "rmtedge/specfun.hpp"

namespace rmtedge {

namespace {

// State for the Painleve II descent: (q, q', I, J, K) with
// I = Int (x-s) q^2, J = Int q, K = Int q^2, all over [s, inf).
using State = std::array<double, 5>;

State deriv(double s, const State& y) {
    const double q = y[0];
    return {y[1], s * q + 2.0 * q * q * q, -y[4], -q, -q * q};
}

// Dormand-Prince 5(4) step; returns the embedded error estimate.
double dp_step(double s, const State& y, double h, State& out) {
    static const double a21 = 1.0 / 5.0;
    static const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
    static const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static const double e1 = 5179.0 / 57600.0, e3 = 7571.0 / 16695.0, e4 = 393.0 / 640.0,
                        e5 = -92097.0 / 339200.0, e6 = 187.0 / 2100.0, e7 = 1.0 / 40.0;

    const State k1 = deriv(s, y);
    State t;
    for (int i = 0; i < 5; ++i) t[i] = y[i] + h * a21 * k1[i];
    const State k2 = deriv(s + h / 5.0, t);
    for (int i = 0; i < 5; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State k3 = deriv(s + 3.0 * h / 10.0, t);
    for (int i = 0; i < 5; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State k4 = deriv(s + 4.0 * h / 5.0, t);
    for (int i = 0; i < 5; ++i)
        t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State k5 = deriv(s + 8.0 * h / 9.0, t);
    for (int i = 0; i < 5; ++i)
        t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const State k6 = deriv(s + h, t);
    for (int i = 0; i < 5; ++i)
        out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const State k7 = deriv(s + h, out);
    // scaled error: relative control is essential, the Hastings-McLeod
    // solution is a separatrix and amplifies absolute noise exponentially
    constexpr double atol = 1e-16, rtol = 1e-11;
    double err = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(out[i]));
        err = std::max(err, std::abs(out[i] - y4) / scale);
    }
    return err;
}

// Advance from s to s_target (backward); accepts steps with scaled error <= 1.
void integrate_to(double& s, State& y, double s_target) {
    double h = -0.01;
    int steps = 0;
    while (s > s_target + 1e-14) {
        if (s + h < s_target) h = s_target - s;
        State out;
        const double err = dp_step(s, y, h, out);
        if (!std::isfinite(err)) {
            h *= 0.2;
        } else {
            if (err <= 1.0) {
                s += h;
                y = out;
            }
            const double safety = 0.9 * std::pow(1.0 / std::max(err, 1e-300), 0.2);
            h *= std::clamp(safety, 0.2, 5.0);
        }
        h = std::max(h, -0.25);
        h = std::min(h, -1e-10);
        if (++steps > 2000000)
            throw std::runtime_error("build_table: Painleve II integration stalled");
    }
    s = s_target;
}

void cdf_pdf_from_state(TwBeta beta, const State& y, double& cdf, double& pdf) {
    const double q = y[0], I = y[2], J = y[3], K = y[4];
    if (beta == TwBeta::Unitary) {
        cdf = std::exp(-I);
        pdf = K * cdf;
    } else {
        cdf = std::exp(-0.5 * (I + J));
        pdf = 0.5 * (K + q) * cdf;
    }
}

double hermite(double t, double h, double f0, double f1, double d0, double d1) {
    // cubic Hermite on [0, h], u = t/h
    const double u = t / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * f0 + (u3 - 2.0 * u2 + u) * h * d0 +
           (-2.0 * u3 + 3.0 * u2) * f1 + (u3 - u2) * h * d1;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CachePath {
    std::mutex mtx;
    std::string path;
};

CachePath& cache_path() {
    static CachePath p;
    return p;
}

} // namespace

void TwTable::validate(bool require_default_coverage) const {
    const size_t m = grid.size();
    auto fail = [](const std::string& what) { throw std::runtime_error("TwTable: " + what); };
    if (m < 2 || cdf.size() != m || pdf.size() != m) fail("inconsistent sizes");
    if (!(step > 0.0) || step > 0.02 + 1e-12) fail("step must be positive and <= 0.02");
    if (require_default_coverage && (grid.front() > -10.0 + 1e-9 || grid.back() < 6.0 - 1e-9))
        fail("grid must cover [-10, 6]");
    if (!(cdf.front() < 1e-6)) fail("left tail not negligible (cdf[first] >= 1e-6)");
    // saturation needs s_max past ~6.5 for F1; enforced for tables used as
    // the process-wide default
    if (require_default_coverage && !(cdf.back() > 1.0 - 1e-6))
        fail("right tail not saturated (cdf[last] <= 1-1e-6)");
    double trap = 0.0;
    for (size_t i = 0; i < m; ++i) {
        if (i > 0) {
            if (grid[i] <= grid[i - 1]) fail("grid not ascending");
            if (cdf[i] < cdf[i - 1]) fail("cdf not nondecreasing");
            trap += 0.5 * (pdf[i] + pdf[i - 1]) * (grid[i] - grid[i - 1]);
        }
        if (cdf[i] < 0.0 || cdf[i] > 1.0) fail("cdf out of [0,1]");
        if (pdf[i] < 0.0) fail("pdf negative");
    }
    if (std::abs(trap - 1.0) > 1e-4) fail("pdf does not integrate to 1 within 1e-4");
    if (beta == TwBeta::Orthogonal) {
        // median must land between s = -1.30 and s = -1.24
        double lo = 0.0, hi = 0.0;
        for (size_t i = 0; i + 1 < m; ++i) {
            if (cdf[i] < 0.5 && cdf[i + 1] >= 0.5) {
                lo = grid[i];
                hi = grid[i + 1];
                break;
            }
        }
        if (!(lo >= -1.30 - 1e-9 && hi <= -1.24 + 1e-9))
            fail("F1 median does not cross 0.5 inside [-1.30, -1.24]");
    }
}

TwTable build_table(TwBeta beta, double s_min, double s_max, double step) {
    if (!(s_min < -8.0) || !(s_max > 4.0) || !(step > 0.0) || step > 0.02)
        throw std::domain_error("build_table: requires s_min < -8, s_max > 4, 0 < step <= 0.02");

    TwTable t;
    t.beta = beta;
    t.s_min = s_min;
    t.s_max = s_max;
    t.step = step;
    const size_t m = static_cast<size_t>(std::floor((s_max - s_min) / step + 1e-9)) + 1;
    t.grid.resize(m);
    for (size_t i = 0; i < m; ++i) t.grid[i] = s_min + static_cast<double>(i) * step;
    t.cdf.assign(m, 0.0);
    t.pdf.assign(m, 0.0);

    // Seed at s0 with the Hastings-McLeod boundary data q ~ Ai and the
    // right-tail integrals of Ai, Ai^2. Keeping s0 close to s_max limits the
    // descent length and with it the separatrix error amplification.
    const double s0 = std::max(8.0, s_max + 1.0);
    const AiryValue a0 = airy(s0);
    State y;
    y[0] = a0.ai;
    y[1] = a0.ai_prime;
    y[2] = integrate_to_decay([&](double x) { const double v = airy(x).ai; return (x - s0) * v * v; }, s0, 1.0);
    y[3] = integrate_to_decay([&](double x) { return airy(x).ai; }, s0, 1.0);
    y[4] = integrate_to_decay([&](double x) { const double v = airy(x).ai; return v * v; }, s0, 1.0);

    double s = s0;
    // the Hastings-McLeod solution is a separatrix: stop descending once the
    // CDF exponent is conclusively negligible, before pole blow-up can bite
    bool dead = false;
    for (size_t k = m; k-- > 0;) {
        if (dead) {
            t.cdf[k] = 0.0;
            t.pdf[k] = 0.0;
            continue;
        }
        integrate_to(s, y, t.grid[k]);
        cdf_pdf_from_state(beta, y, t.cdf[k], t.pdf[k]);
        if (!std::isfinite(t.cdf[k]) || !std::isfinite(t.pdf[k]))
            throw std::runtime_error("build_table: non-finite value during Painleve descent");
        const double expo = beta == TwBeta::Unitary ? y[2] : 0.5 * (y[2] + y[3]);
        if (expo > 25.0 && t.grid[k] < -6.0) dead = true;
        if (std::abs(y[0]) > 10.0) {
            // q has left the separatrix; only reachable where the CDF is 0
            if (expo < 25.0)
                throw std::runtime_error("build_table: Painleve descent lost the Hastings-McLeod branch");
            dead = true;
        }
    }
    for (size_t i = 0; i < m; ++i) {
        t.cdf[i] = std::clamp(t.cdf[i], 0.0, 1.0);
        t.pdf[i] = std::max(t.pdf[i], 0.0);
    }
    t.validate();
    return t;
}

double TwTable::cdf_at(double s) const {
    if (s <= grid.front()) return 0.0;
    if (s >= grid.back()) return 1.0;
    const auto it = std::upper_bound(grid.begin(), grid.end(), s);
    const size_t i = static_cast<size_t>(it - grid.begin()) - 1;
    const double h = grid[i + 1] - grid[i];
    const double v = hermite(s - grid[i], h, cdf[i], cdf[i + 1], pdf[i], pdf[i + 1]);
    return std::clamp(v, cdf[i], cdf[i + 1]);
}

double TwTable::pdf_at(double s) const {
    if (s <= grid.front() || s >= grid.back()) return 0.0;
    const auto it = std::upper_bound(grid.begin(), grid.end(), s);
    const size_t i = static_cast<size_t>(it - grid.begin()) - 1;
    const double u = (s - grid[i]) / (grid[i + 1] - grid[i]);
    return (1.0 - u) * pdf[i] + u * pdf[i + 1];
}

double TwTable::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("quantile: requires q in (0, 1)");
    if (q < cdf.front() || q > cdf.back())
        throw std::out_of_range("quantile: q outside the tabulated range; refusing to extrapolate");
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), q);
    size_t i = static_cast<size_t>(it - cdf.begin());
    if (i > 0) --i;
    double lo = grid[i];
    double hi = grid[std::min(i + 1, grid.size() - 1)];
    double s = 0.5 * (lo + hi);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = cdf_at(s) - q;
        if (std::abs(f) < 1e-12) break;
        if (f > 0.0) hi = s;
        else lo = s;
        const double d = pdf_at(s);
        double next = (d > 1e-12) ? s - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

void save_table(const TwTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_table: cannot open '" + path + "'");
    out << "# tw-table beta=" << static_cast<int>(table.beta) << " smin=" << format17(table.s_min)
        << " smax=" << format17(table.s_max) << " step=" << format17(table.step) << "\n";
    for (size_t i = 0; i < table.grid.size(); ++i) {
        out << format17(table.grid[i]) << ',' << format17(table.cdf[i]) << ','
            << format17(table.pdf[i]) << "\n";
    }
    if (!out) throw std::runtime_error("save_table: write failed for '" + path + "'");
}

TwTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_table: cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    int beta = 0;
    double smin = 0.0, smax = 0.0, step = 0.0;
    if (std::sscanf(header.c_str(), "# tw-table beta=%d smin=%lf smax=%lf step=%lf", &beta, &smin,
                    &smax, &step) != 4 ||
        (beta != 1 && beta != 2))
        throw std::runtime_error("load_table: malformed header in '" + path + "'");
    TwTable t;
    t.beta = static_cast<TwBeta>(beta);
    t.s_min = smin;
    t.s_max = smax;
    t.step = step;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double s = 0.0, c = 0.0, p = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &c, &p) != 3)
            throw std::runtime_error("load_table: malformed row in '" + path + "'");
        t.grid.push_back(s);
        t.cdf.push_back(c);
        t.pdf.push_back(p);
    }
    t.validate();
    return t;
}

void set_table_cache_path(const std::string& path) {
    auto& cp = cache_path();
    std::lock_guard<std::mutex> lock(cp.mtx);
    cp.path = path;
}

namespace {

TwTable make_default_table(TwBeta beta) {
    std::string path;
    {
        auto& cp = cache_path();
        std::lock_guard<std::mutex> lock(cp.mtx);
        path = cp.path;
    }
    bool file_has_table = false;
    if (!path.empty()) {
        try {
            TwTable cached = load_table(path);
            file_has_table = true; // a parseable table is someone's cache; never clobber it
            if (cached.beta == beta) {
                cached.validate(true);
                return cached;
            }
        } catch (const std::exception&) {
            // fall through to a fresh build
        }
    }
    // 1 - F1(6) is ~2e-6, so the right end must sit past 6 for the
    // saturated-tail invariant to hold
    TwTable t = build_table(beta, -10.0, 7.0, 0.005);
    if (!path.empty() && !file_has_table) {
        try {
            save_table(t, path);
        } catch (const std::exception&) {
            // cache write is best-effort
        }
    }
    return t;
}

} // namespace

const TwTable& cached_table(TwBeta beta) {
    static const TwTable f1 = make_default_table(TwBeta::Orthogonal);
    static const TwTable f2 = make_default_table(TwBeta::Unitary);
    return beta == TwBeta::Orthogonal ? f1 : f2;
}

double tw_cdf(TwBeta beta, double s) {
    if (!std::isfinite(s)) throw std::domain_error("tw_cdf: non-finite argument");
    return cached_table(beta).cdf_at(s);
}

double tw_pdf(TwBeta beta, double s) {
    if (!std::isfinite(s)) throw std::domain_error("tw_pdf: non-finite argument");
    return cached_table(beta).pdf_at(s);
}

double reflected_cdf(double s) { return 1.0 - tw_cdf(TwBeta::Orthogonal, -s); }

double tw_quantile(TwBeta beta, double q) { return cached_table(beta).quantile(q); }

double largest_pvalue(int n, int p, double lambda, Variant variant) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("largest_pvalue: requires lambda > 0");
    double s = 0.0;
    switch (variant) {
        case Variant::Original: {
            const ScalePair c = johnstone_constants(n, p);
            s = (lambda - c.center) / c.scale;
            break;
        }
        case Variant::SecondOrder: {
            const ScalePair c = second_order_constants(n, p);
            s = (lambda - c.center) / c.scale;
            break;
        }
        case Variant::LogLargest: {
            const ScalePair c = log_constants(n, p);
            s = (std::log(lambda) - c.center) / c.scale;
            break;
        }
        case Variant::LogSmallest:
            throw std::invalid_argument("largest_pvalue: LogSmallest is a smallest-eigenvalue variant");
    }
    return 1.0 - tw_cdf(TwBeta::Orthogonal, s);
}

double smallest_pvalue(int n, int p, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("smallest_pvalue: requires lambda > 0");
    const ScalePair c = smallest_log_constants(n, p);
    const double s = (std::log(lambda) - c.center) / c.scale;
    return reflected_cdf(s);
}

} // namespace rmtedge
