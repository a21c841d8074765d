#pragma once

#include <string>
#include <vector>

#include "rmtedge/scaling.hpp"

namespace rmtedge {

enum class TwBeta { Orthogonal = 1, Unitary = 2 };

// Tabulated CDF/PDF of a Tracy-Widom-family law on a fixed grid.
struct TwTable {
    TwBeta beta = TwBeta::Orthogonal;
    double s_min = 0.0;
    double s_max = 0.0;
    double step = 0.0;
    std::vector<double> grid;
    std::vector<double> cdf;
    std::vector<double> pdf;

    // Throws std::runtime_error when a table invariant fails.
    void validate(bool require_default_coverage = false) const;

    double cdf_at(double s) const;  // monotone Hermite interpolation, clamped outside
    double pdf_at(double s) const;
    double quantile(double q) const; // throws std::out_of_range beyond table coverage
};

// Build a table by integrating the Hastings-McLeod Painleve II solution
// together with the Tracy-Widom tail integrals. Deterministic.
// Requires s_min < -8, s_max > 4, step <= 0.02.
TwTable build_table(TwBeta beta, double s_min, double s_max, double step);

// Text serialization: "# tw-table beta=<1|2> smin=<> smax=<> step=<>" header,
// then one "s,cdf,pdf" row per grid point at 17 significant digits.
void save_table(const TwTable& table, const std::string& path);
TwTable load_table(const std::string& path);

// Optional process-wide cache file consulted by the lazily built default
// tables (grid [-10, 7], step 0.005). Must be set before first tw_cdf use
// to take effect.
void set_table_cache_path(const std::string& path);

// Shared immutable default table per beta (built once per process).
const TwTable& cached_table(TwBeta beta);

double tw_cdf(TwBeta beta, double s);
double tw_pdf(TwBeta beta, double s);

// Reflected orthogonal law G1(s) = 1 - F1(-s).
double reflected_cdf(double s);

// Inverse CDF with |tw_cdf(beta, result) - q| <= 1e-4; q in (0, 1).
double tw_quantile(TwBeta beta, double q);

// Approximate P{lambda_1 > lambda} for a white Wishart matrix, under the
// requested rescaling variant (Original, SecondOrder or LogLargest).
double largest_pvalue(int n, int p, double lambda, Variant variant);

// Approximate P{lambda_p <= lambda} via the reflected law on the log scale.
double smallest_pvalue(int n, int p, double lambda);

} // namespace rmtedge
