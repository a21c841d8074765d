#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rmtedge/ensemble.hpp"
#include "rmtedge/rng.hpp"
#include "rmtedge/twlimit.hpp"
#include "support/oracles.hpp"

using namespace rmtedge;

namespace {

// dense route: explicit Gaussian data matrix -> Gram matrix -> Jacobi
double dense_wishart_largest(int n, int p, RngStream& stream) {
    std::vector<double> x(static_cast<size_t>(n) * p);
    for (auto& v : x) v = stream.normal();
    std::vector<double> a(static_cast<size_t>(p) * p, 0.0);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double dot = 0.0;
            for (int r = 0; r < n; ++r)
                dot += x[static_cast<size_t>(r) * p + i] * x[static_cast<size_t>(r) * p + j];
            a[static_cast<size_t>(i) * p + j] = dot;
            a[static_cast<size_t>(j) * p + i] = dot;
        }
    }
    return oracles::jacobi_eigenvalues(a, p).back();
}

} // namespace

TEST_CASE("chi_sample moments and determinism") {
    const double df = 3.7;
    const long reps = 100000;
    double sum = 0.0;
    for (long r = 0; r < reps; ++r) {
        RngStream s(42, static_cast<std::uint64_t>(r));
        const double v = chi_sample(df, s);
        sum += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt(2.0 * df / reps);
    CHECK(std::abs(mean - df) < 4.0 * se);

    RngStream a(7, 13), b(7, 13);
    CHECK(chi_sample(2.5, a) == chi_sample(2.5, b));
    RngStream c(7, 14);
    CHECK(chi_sample(2.5, a) != chi_sample(2.5, c));
    RngStream d(8, 13);
    CHECK_THROWS_AS(chi_sample(0.0, d), std::domain_error);
    CHECK_THROWS_AS(chi_sample(-1.0, d), std::domain_error);
}

TEST_CASE("chi squared with df=2 is Exp(mean 2)") {
    const long reps = 10000;
    std::vector<double> draws(reps);
    for (long r = 0; r < reps; ++r) {
        RngStream s(271828, static_cast<std::uint64_t>(r));
        const double v = chi_sample(2.0, s);
        draws[static_cast<size_t>(r)] = v * v;
    }
    const double d = oracles::ks_one_sample(draws, [](double x) { return 1.0 - std::exp(-0.5 * x); });
    CHECK(d < oracles::ks_critical(0.01, static_cast<double>(reps)));
}

TEST_CASE("tridiagonal factor: expected trace is n*p") {
    const int n = 10, p = 4;
    const long reps = 10000;
    double sum = 0.0;
    for (long r = 0; r < reps; ++r) {
        RngStream s(5, static_cast<std::uint64_t>(r));
        const SymTridiagonal t = sample_tridiagonal(n, p, EnsembleBeta::Real, s);
        for (const double d : t.diag) sum += d;
    }
    const double mean = sum / reps;
    const double se = std::sqrt(2.0 * n * p / static_cast<double>(reps));
    CHECK(std::abs(mean - n * p) < 4.0 * se);
}

TEST_CASE("tridiagonal factor at p=1 reduces to a chi squared scalar") {
    const long reps = 10000;
    std::vector<double> a(reps), b(reps);
    for (long r = 0; r < reps; ++r) {
        RngStream s(11, static_cast<std::uint64_t>(r));
        const SymTridiagonal t = sample_tridiagonal(6, 1, EnsembleBeta::Real, s);
        REQUIRE(t.diag.size() == 1);
        REQUIRE(t.offdiag.empty());
        a[static_cast<size_t>(r)] = t.diag[0];
        RngStream s2(12, static_cast<std::uint64_t>(r));
        const double c = chi_sample(6.0, s2);
        b[static_cast<size_t>(r)] = c * c;
    }
    const double d = oracles::ks_two_sample(a, b);
    CHECK(d < oracles::ks_critical_two(0.01, static_cast<double>(reps), static_cast<double>(reps)));
}

TEST_CASE("tridiagonal route matches the dense Gaussian oracle at (40, 10)") {
    const long reps = 10000;
    std::vector<double> tri(reps), dense(reps);
    for (long r = 0; r < reps; ++r) {
        RngStream s(101, static_cast<std::uint64_t>(r));
        tri[static_cast<size_t>(r)] =
            extreme_eigenvalue(sample_tridiagonal(40, 10, EnsembleBeta::Real, s), Which::Largest);
        RngStream s2(202, static_cast<std::uint64_t>(r));
        dense[static_cast<size_t>(r)] = dense_wishart_largest(40, 10, s2);
    }
    const double d = oracles::ks_two_sample(tri, dense);
    CHECK(d < oracles::ks_critical_two(0.01, static_cast<double>(reps), static_cast<double>(reps)));
}

TEST_CASE("extreme_eigenvalue closed forms") {
    SymTridiagonal t;
    t.diag = {2.0, 2.0};
    t.offdiag = {1.0};
    CHECK(extreme_eigenvalue(t, Which::Largest) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(extreme_eigenvalue(t, Which::Smallest) == doctest::Approx(1.0).epsilon(1e-12));
    SymTridiagonal d;
    d.diag = {4.0, -1.0, 2.5, 0.25};
    d.offdiag = {0.0, 0.0, 0.0};
    CHECK(extreme_eigenvalue(d, Which::Largest) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(extreme_eigenvalue(d, Which::Smallest) == doctest::Approx(-1.0).epsilon(1e-12));
    SymTridiagonal one;
    one.diag = {7.25};
    CHECK(extreme_eigenvalue(one, Which::Largest) == 7.25);
}

TEST_CASE("extreme_eigenvalue matches the dense eigensolver on random tridiagonals") {
    for (int rep = 0; rep < 200; ++rep) {
        RngStream s(999, static_cast<std::uint64_t>(rep));
        const int p = 12;
        SymTridiagonal t;
        t.diag.resize(p);
        t.offdiag.resize(p - 1);
        for (auto& v : t.diag) v = 4.0 * s.normal();
        for (auto& v : t.offdiag) v = std::abs(2.0 * s.normal());
        std::vector<double> dense(static_cast<size_t>(p) * p, 0.0);
        for (int i = 0; i < p; ++i) dense[static_cast<size_t>(i) * p + i] = t.diag[static_cast<size_t>(i)];
        for (int i = 0; i + 1 < p; ++i) {
            dense[static_cast<size_t>(i) * p + i + 1] = t.offdiag[static_cast<size_t>(i)];
            dense[static_cast<size_t>(i + 1) * p + i] = t.offdiag[static_cast<size_t>(i)];
        }
        const std::vector<double> eig = oracles::jacobi_eigenvalues(dense, p);
        const double scale = std::max(std::abs(eig.front()), std::abs(eig.back()));
        CHECK(std::abs(extreme_eigenvalue(t, Which::Largest) - eig.back()) < 1e-9 * std::max(1.0, scale));
        CHECK(std::abs(extreme_eigenvalue(t, Which::Smallest) - eig.front()) < 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("swap invariance of the sampled factor") {
    const std::vector<double> a = sample_extremes(2, 8, 64, 31337, Which::Largest);
    const std::vector<double> b = sample_extremes(8, 2, 64, 31337, Which::Largest);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("mc_cdf_at is deterministic under any worker count") {
    const std::vector<double> pts(table1_percentiles().begin(), table1_percentiles().end());
    const McReport r1 = mc_cdf_at(20, 5, 2000, 77, pts, Variant::SecondOrder, Which::Largest, 1);
    const McReport r4 = mc_cdf_at(20, 5, 2000, 77, pts, Variant::SecondOrder, Which::Largest, 4);
    REQUIRE(r1.rows.size() == r4.rows.size());
    for (size_t i = 0; i < r1.rows.size(); ++i) {
        CHECK(r1.rows[i].empirical_cdf == r4.rows[i].empirical_cdf);
        CHECK(r1.rows[i].se == r4.rows[i].se);
    }
}

TEST_CASE("mc_cdf_at rows are monotone with exact binomial SEs") {
    const std::vector<double> pts(table1_percentiles().begin(), table1_percentiles().end());
    const McReport r = mc_cdf_at(10, 4, 3000, 5, pts, Variant::SecondOrder, Which::Largest);
    for (size_t i = 0; i < r.rows.size(); ++i) {
        if (i > 0) CHECK(r.rows[i].empirical_cdf >= r.rows[i - 1].empirical_cdf);
        const double phat = r.rows[i].empirical_cdf;
        CHECK(r.rows[i].se == doctest::Approx(std::sqrt(phat * (1.0 - phat) / 3000.0)).epsilon(1e-12));
    }
}

TEST_CASE("mc_cdf_at argument validation") {
    const std::vector<double> pts = {0.0, 1.0};
    CHECK_THROWS_AS(mc_cdf_at(10, 4, 0, 5, pts, Variant::SecondOrder, Which::Largest),
                    std::domain_error);
    CHECK_THROWS_AS(mc_cdf_at(10, 4, 10, 5, {}, Variant::SecondOrder, Which::Largest),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_cdf_at(10, 4, 10, 5, {1.0, 0.0}, Variant::SecondOrder, Which::Largest),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_cdf_at(10, 4, 10, 5, pts, Variant::LogSmallest, Which::Largest),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_cdf_at(10, 4, 10, 5, pts, Variant::SecondOrder, Which::Smallest),
                    std::invalid_argument);
}

TEST_CASE("table_row smoke reproduction at (2,2)") {
    const McReport r = table_row(2, 2, 4000, 9, Variant::SecondOrder);
    REQUIRE(r.rows.size() == 9);
    // right-tail columns of the published 2x2 row: .908 / .953 / .988
    CHECK(std::abs(r.rows[6].empirical_cdf - 0.908) < 0.03);
    CHECK(std::abs(r.rows[7].empirical_cdf - 0.953) < 0.025);
    CHECK(std::abs(r.rows[8].empirical_cdf - 0.988) < 0.02);
}

TEST_CASE("percentile relative error bounds and validation") {
    const double r = mc_percentile_relative_error(20, 5, 20000, 0.95, 4);
    CHECK(std::abs(r) < 0.2);
    CHECK_THROWS_AS(mc_percentile_relative_error(20, 5, 20000, 1.2, 4), std::domain_error);
    CHECK_THROWS_AS(mc_percentile_relative_error(20, 5, 50, 0.999, 4), std::domain_error);
}

TEST_CASE("percentile relative error stabilizes as reps grow") {
    const double r1 = mc_percentile_relative_error(20, 5, 100000, 0.95, 17);
    const double r5 = mc_percentile_relative_error(20, 5, 500000, 0.95, 18);
    CHECK(std::abs(r1 - r5) < 0.01);
}

TEST_CASE("original and second-order rows separate at (20, 5)") {
    const McReport orig = table_row(20, 5, 40000, 21, Variant::Original);
    const McReport second = table_row(20, 5, 40000, 21, Variant::SecondOrder);
    // published row: .905 (second) vs (.919) (original) at the .90 column
    CHECK(orig.rows[6].empirical_cdf - second.rows[6].empirical_cdf >= 0.005);
}

TEST_CASE("report CSV round trip") {
    const std::vector<double> pts(table2_percentiles().begin(), table2_percentiles().end());
    const McReport r = mc_cdf_at(20, 10, 500, 123, pts, Variant::LogSmallest, Which::Smallest);
    const std::string csv = to_csv(r);
    const McReport back = report_from_csv(csv);
    CHECK(back.n == r.n);
    CHECK(back.p == r.p);
    CHECK(back.reps == r.reps);
    CHECK(back.seed == r.seed);
    CHECK(back.variant == r.variant);
    CHECK(back.which == r.which);
    REQUIRE(back.rows.size() == r.rows.size());
    CHECK(to_csv(back) == csv); // canonical fixed-point
    CHECK_THROWS_AS(report_from_csv("garbage"), std::invalid_argument);
}

TEST_CASE("report JSON round trip") {
    const std::vector<double> pts(table1_percentiles().begin(), table1_percentiles().end());
    const McReport r = mc_cdf_at(8, 2, 400, 55, pts, Variant::Original, Which::Largest);
    const std::string json = to_json(r);
    const McReport back = report_from_json(json);
    CHECK(back.n == r.n);
    CHECK(back.variant == r.variant);
    CHECK(back.which == r.which);
    REQUIRE(back.rows.size() == r.rows.size());
    CHECK(to_json(back) == json);
}
