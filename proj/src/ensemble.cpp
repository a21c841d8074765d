#include "rmtedge/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rmtedge/twlimit.hpp"

#include <json.hpp>

namespace rmtedge {

const char* which_name(Which w) { return w == Which::Largest ? "largest" : "smallest"; }

Which which_from_name(const char* name) {
    const std::string s(name);
    if (s == "largest") return Which::Largest;
    if (s == "smallest") return Which::Smallest;
    throw std::invalid_argument("unknown which '" + s + "' (expected largest|smallest)");
}

SymTridiagonal sample_tridiagonal(int n, int p, EnsembleBeta beta, RngStream& stream) {
    if (n < 1 || p < 1) throw std::domain_error("sample_tridiagonal: requires n, p >= 1");
    const int rows = std::max(n, p); // chi degrees run off the larger dimension
    const int dim = std::min(n, p);
    const double b = static_cast<double>(beta);
    const double inv_sb = 1.0 / std::sqrt(b);
    std::vector<double> d(static_cast<size_t>(dim));
    std::vector<double> e(dim > 1 ? static_cast<size_t>(dim - 1) : 0);
    for (int i = 0; i < dim; ++i) d[static_cast<size_t>(i)] = stream.chi(b * (rows - i)) * inv_sb;
    for (int i = 0; i + 1 < dim; ++i) e[static_cast<size_t>(i)] = stream.chi(b * (dim - 1 - i)) * inv_sb;
    SymTridiagonal t;
    t.diag.resize(static_cast<size_t>(dim));
    t.offdiag.resize(e.size());
    t.diag[0] = d[0] * d[0];
    for (int i = 1; i < dim; ++i) {
        t.diag[static_cast<size_t>(i)] =
            d[static_cast<size_t>(i)] * d[static_cast<size_t>(i)] +
            e[static_cast<size_t>(i - 1)] * e[static_cast<size_t>(i - 1)];
    }
    for (int i = 0; i + 1 < dim; ++i)
        t.offdiag[static_cast<size_t>(i)] = d[static_cast<size_t>(i)] * e[static_cast<size_t>(i)];
    return t;
}

namespace {

// Number of eigenvalues strictly below x (Sturm sequence sign count).
int count_below(const SymTridiagonal& t, double x) {
    const size_t p = t.diag.size();
    int count = 0;
    double q = 1.0;
    for (size_t i = 0; i < p; ++i) {
        const double e2 = i > 0 ? t.offdiag[i - 1] * t.offdiag[i - 1] : 0.0;
        q = t.diag[i] - x - (i > 0 ? e2 / q : 0.0);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace

double extreme_eigenvalue(const SymTridiagonal& t, Which which) {
    const size_t p = t.diag.size();
    if (p == 0) throw std::domain_error("extreme_eigenvalue: empty matrix");
    if (p == 1) return t.diag[0];
    double lo = t.diag[0], hi = t.diag[0];
    for (size_t i = 0; i < p; ++i) {
        const double r = (i > 0 ? std::abs(t.offdiag[i - 1]) : 0.0) +
                         (i + 1 < p ? std::abs(t.offdiag[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double pad = 1e-10 * std::max({std::abs(lo), std::abs(hi), 1.0});
    lo -= pad;
    hi += pad;
    const int want = which == Which::Largest ? static_cast<int>(p) : 1;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(t, mid) >= want) hi = mid;
        else lo = mid;
        if (hi - lo <= 1e-13 * std::max(std::abs(lo), std::abs(hi)) + 1e-300) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> sample_extremes(int n, int p, long reps, std::uint64_t seed, Which which,
                                    EnsembleBeta beta, int threads) {
    if (reps < 1) throw std::domain_error("sample_extremes: requires reps >= 1");
    if (n < 1 || p < 1) throw std::domain_error("sample_extremes: requires n, p >= 1");
    std::vector<double> out(static_cast<size_t>(reps));
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));
    auto run = [&](long lo, long hi) {
        for (long r = lo; r < hi; ++r) {
            RngStream stream(seed, static_cast<std::uint64_t>(r));
            const SymTridiagonal t = sample_tridiagonal(n, p, beta, stream);
            out[static_cast<size_t>(r)] = extreme_eigenvalue(t, which);
        }
    };
    if (workers <= 1) {
        run(0, reps);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (reps + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const long lo = static_cast<long>(w) * chunk;
            const long hi = std::min(reps, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

namespace {

ScalePair constants_for(Variant variant, int n, int p) {
    switch (variant) {
        case Variant::Original: return johnstone_constants(n, p);
        case Variant::SecondOrder: return second_order_constants(n, p);
        case Variant::LogLargest: return log_constants(n, p);
        case Variant::LogSmallest: return smallest_log_constants(n, p);
    }
    throw std::invalid_argument("unknown variant");
}

double rescale(double lambda, const ScalePair& c) {
    if (c.variant == Variant::LogLargest || c.variant == Variant::LogSmallest)
        return (std::log(lambda) - c.center) / c.scale;
    return (lambda - c.center) / c.scale;
}

} // namespace

McReport mc_cdf_at(int n, int p, long reps, std::uint64_t seed, const std::vector<double>& s_points,
                   Variant variant, Which which, int threads) {
    if (reps < 1) throw std::domain_error("mc_cdf_at: requires reps >= 1");
    if (s_points.empty()) throw std::invalid_argument("mc_cdf_at: no evaluation points");
    if (!std::is_sorted(s_points.begin(), s_points.end()))
        throw std::invalid_argument("mc_cdf_at: s_points must be ascending");
    const bool smallest = which == Which::Smallest;
    if (smallest != (variant == Variant::LogSmallest))
        throw std::invalid_argument("mc_cdf_at: variant/which mismatch (LogSmallest <=> Smallest)");
    const ScalePair c = constants_for(variant, n, p);
    const std::vector<double> draws = sample_extremes(n, p, reps, seed, which, EnsembleBeta::Real, threads);
    McReport rep;
    rep.n = n;
    rep.p = p;
    rep.reps = reps;
    rep.seed = seed;
    rep.variant = variant;
    rep.which = which;
    std::vector<long> counts(s_points.size(), 0);
    for (const double lambda : draws) {
        const double s = rescale(lambda, c);
        // s_points ascending: count each threshold with s <= point
        const auto it = std::lower_bound(s_points.begin(), s_points.end(), s);
        for (size_t i = static_cast<size_t>(it - s_points.begin()); i < s_points.size(); ++i)
            ++counts[i];
    }
    for (size_t i = 0; i < s_points.size(); ++i) {
        const double phat = static_cast<double>(counts[i]) / static_cast<double>(reps);
        rep.rows.push_back({s_points[i], phat, std::sqrt(phat * (1.0 - phat) / static_cast<double>(reps))});
    }
    return rep;
}

double mc_percentile_relative_error(int n, int p, long reps, double alpha, std::uint64_t seed,
                                    int threads) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("mc_percentile_relative_error: alpha in (0,1) required");
    if (reps < static_cast<long>(std::ceil(10.0 / std::min(alpha, 1.0 - alpha))))
        throw std::domain_error("mc_percentile_relative_error: too few replications for this alpha");
    std::vector<double> draws = sample_extremes(n, p, reps, seed, Which::Largest, EnsembleBeta::Real, threads);
    std::sort(draws.begin(), draws.end());
    const size_t idx = static_cast<size_t>(std::ceil(alpha * static_cast<double>(reps))) - 1;
    const double emp = draws[std::min(idx, draws.size() - 1)];
    const ScalePair c = second_order_constants(n, p);
    const double tw = c.center + c.scale * tw_quantile(TwBeta::Orthogonal, alpha);
    return tw / emp - 1.0;
}

const std::array<double, 9>& table1_percentiles() {
    static const std::array<double, 9> pts = {-3.8954, -3.1804, -2.7824, -1.9104, -1.2686,
                                              -0.5923, 0.4501,  0.9793,  2.0234};
    return pts;
}

const std::array<double, 9>& table2_percentiles() {
    static const std::array<double, 9> pts = {-2.0234, -0.9793, -0.4501, 0.5923, 1.2686,
                                              1.9104,  2.7824,  3.1804,  3.8954};
    return pts;
}

McReport table_row(int n, int p, long reps, std::uint64_t seed, Variant variant, int threads) {
    const bool smallest = variant == Variant::LogSmallest;
    const auto& pts = smallest ? table2_percentiles() : table1_percentiles();
    return mc_cdf_at(n, p, reps, seed, std::vector<double>(pts.begin(), pts.end()), variant,
                     smallest ? Which::Smallest : Which::Largest, threads);
}

namespace {

std::string fmt(double v, int decimals) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

std::string to_csv(const McReport& report) {
    std::ostringstream out;
    out << "n,p,reps,seed,variant,which\n";
    out << report.n << ',' << report.p << ',' << report.reps << ',' << report.seed << ','
        << variant_name(report.variant) << ',' << which_name(report.which) << "\n";
    out << "s,empirical_cdf,se\n";
    for (const auto& row : report.rows)
        out << fmt(row.s, 4) << ',' << fmt(row.empirical_cdf, 6) << ',' << fmt(row.se, 6) << "\n";
    return out.str();
}

McReport report_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "n,p,reps,seed,variant,which")
        throw std::invalid_argument("report_from_csv: missing field header");
    if (!std::getline(in, line)) throw std::invalid_argument("report_from_csv: missing field row");
    McReport rep;
    {
        std::istringstream fields(line);
        std::string item;
        std::vector<std::string> parts;
        while (std::getline(fields, item, ',')) parts.push_back(item);
        if (parts.size() != 6) throw std::invalid_argument("report_from_csv: malformed field row");
        rep.n = std::stoi(parts[0]);
        rep.p = std::stoi(parts[1]);
        rep.reps = std::stol(parts[2]);
        rep.seed = std::stoull(parts[3]);
        rep.variant = variant_from_name(parts[4].c_str());
        rep.which = which_from_name(parts[5].c_str());
    }
    if (!std::getline(in, line) || line != "s,empirical_cdf,se")
        throw std::invalid_argument("report_from_csv: missing row header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        McRow row;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &row.s, &row.empirical_cdf, &row.se) != 3)
            throw std::invalid_argument("report_from_csv: malformed data row");
        rep.rows.push_back(row);
    }
    return rep;
}

std::string to_json(const McReport& report) {
    nlohmann::json j;
    j["n"] = report.n;
    j["p"] = report.p;
    j["reps"] = report.reps;
    j["seed"] = report.seed;
    j["variant"] = variant_name(report.variant);
    j["which"] = which_name(report.which);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"s", std::stod(fmt(row.s, 4))},
                        {"empirical_cdf", std::stod(fmt(row.empirical_cdf, 6))},
                        {"se", std::stod(fmt(row.se, 6))}});
    }
    j["rows"] = std::move(rows);
    return j.dump();
}

McReport report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    McReport rep;
    rep.n = j.at("n").get<int>();
    rep.p = j.at("p").get<int>();
    rep.reps = j.at("reps").get<long>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.variant = variant_from_name(j.at("variant").get<std::string>().c_str());
    rep.which = which_from_name(j.at("which").get<std::string>().c_str());
    for (const auto& row : j.at("rows")) {
        rep.rows.push_back({row.at("s").get<double>(), row.at("empirical_cdf").get<double>(),
                            row.at("se").get<double>()});
    }
    return rep;
}

} // namespace rmtedge
