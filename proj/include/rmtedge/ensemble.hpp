#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rmtedge/rng.hpp"
#include "rmtedge/scaling.hpp"

namespace rmtedge {

// Symmetric tridiagonal matrix (diagonal + nonnegative off-diagonal).
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag; // size diag.size() - 1
};

enum class EnsembleBeta { Real = 1, Complex = 2 };
enum class Which { Largest, Smallest };

const char* which_name(Which w);
Which which_from_name(const char* name);

// Bidiagonal beta-ensemble factor: T = B B' with B lower bidiagonal,
// diagonal chi_{beta(n-i+1)} and subdiagonal chi_{beta(p-i)} entries
// (entries divided by sqrt(beta) for beta = 2). Eigenvalues of T follow the
// extreme-eigenvalue law of W_p(I, n) (beta = 1) or its complex analogue.
// For n < p the roles are swapped before construction (the nonzero spectrum
// is swap-invariant).
SymTridiagonal sample_tridiagonal(int n, int p, EnsembleBeta beta, RngStream& stream);

// Requested extreme eigenvalue to ~1e-12 relative accuracy via
// Sturm-sequence bisection inside the Gershgorin interval.
double extreme_eigenvalue(const SymTridiagonal& T, Which which);

// Monte-Carlo reproduction record.
struct McRow {
    double s = 0.0;
    double empirical_cdf = 0.0;
    double se = 0.0;
};

struct McReport {
    int n = 0;
    int p = 0;
    long reps = 0;
    std::uint64_t seed = 0;
    Variant variant = Variant::SecondOrder;
    Which which = Which::Largest;
    std::vector<McRow> rows;
};

// Extreme-eigenvalue draws; replication r is generated from substream
// (seed, r), so the result is independent of the worker schedule.
std::vector<double> sample_extremes(int n, int p, long reps, std::uint64_t seed, Which which,
                                    EnsembleBeta beta = EnsembleBeta::Real, int threads = 0);

// Empirical CDF of the rescaled extreme eigenvalue at the given points
// (ascending), with binomial standard errors.
McReport mc_cdf_at(int n, int p, long reps, std::uint64_t seed, const std::vector<double>& s_points,
                   Variant variant, Which which, int threads = 0);

// Relative error of the Tracy-Widom percentile against the Monte-Carlo
// percentile: (mu~ + sigma~ twq(alpha)) / empirical-alpha-quantile - 1.
double mc_percentile_relative_error(int n, int p, long reps, double alpha, std::uint64_t seed,
                                    int threads = 0);

// mc_cdf_at evaluated at the nine tabulated header percentiles
// (largest-eigenvalue set for Original/SecondOrder/LogLargest, reflected
// set for LogSmallest).
McReport table_row(int n, int p, long reps, std::uint64_t seed, Variant variant, int threads = 0);

const std::array<double, 9>& table1_percentiles();
const std::array<double, 9>& table2_percentiles();

// CSV / JSON serialization (6 decimals for probabilities, 4 for s).
std::string to_csv(const McReport& report);
McReport report_from_csv(const std::string& text);
std::string to_json(const McReport& report);
McReport report_from_json(const std::string& text);

} // namespace rmtedge
