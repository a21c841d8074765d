#include "rmtedge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmtedge/ensemble.hpp"
#include "rmtedge/lgasym.hpp"
#include "rmtedge/scaling.hpp"
#include "rmtedge/twlimit.hpp"

namespace rmtedge {

namespace {

std::string fmt(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> parse_points(const std::string& csv) {
    std::vector<double> pts;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        pts.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad --points entry '" + item + "'");
    }
    if (pts.empty()) throw std::invalid_argument("--points parsed to an empty list");
    return pts;
}

std::vector<std::pair<int, int>> parse_rows(const std::string& csv) {
    std::vector<std::pair<int, int>> rows;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        int n = 0, p = 0;
        if (std::sscanf(item.c_str(), "%dx%d", &n, &p) != 2)
            throw std::invalid_argument("bad --rows entry '" + item + "' (expected NxP)");
        rows.emplace_back(n, p);
    }
    if (rows.empty()) throw std::invalid_argument("--rows parsed to an empty list");
    return rows;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::invalid_argument("--rungs parsed to an empty list");
    return out;
}

struct Sink {
    std::ostream& fallback;
    std::string path;

    void write(const std::string& text) const {
        if (path.empty()) {
            fallback << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open --out file '" + path + "'");
        f << text;
        if (!f) throw std::runtime_error("write failed for --out file '" + path + "'");
    }
};

} // namespace

std::optional<std::string> warn_theory_gap(int n, int p) {
    if (n == p)
        return "note: the second-order result is proved for n != p; numerical experiments "
               "suggest the approximation works just as well for n = p";
    if (p % 2 != 0)
        return "note: the second-order result is proved for p even; numerical experiments "
               "suggest the approximation works just as well for p odd";
    return std::nullopt;
}

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tracy-Widom approximations for white Wishart extreme eigenvalues"};
    app.require_subcommand(1);

    std::string format = "csv";
    std::string out_path;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "write the report to this file instead of stdout");

    if (const char* cache = std::getenv("RMT_EDGE_TABLE_CACHE"); cache && *cache)
        set_table_cache_path(cache);

    // cdf
    auto* cdf_cmd = app.add_subcommand("cdf", "Tracy-Widom CDF F_beta(s)");
    int cdf_beta = 1;
    double cdf_s = 0.0;
    bool cdf_reflected = false;
    cdf_cmd->add_option("--beta", cdf_beta)->check(CLI::IsMember({1, 2}));
    cdf_cmd->add_option("--s", cdf_s)->required();
    cdf_cmd->add_flag("--reflected", cdf_reflected, "evaluate G1(s) = 1 - F1(-s)");

    // quantile
    auto* q_cmd = app.add_subcommand("quantile", "Tracy-Widom quantile");
    int q_beta = 1;
    double q_q = 0.5;
    q_cmd->add_option("--beta", q_beta)->check(CLI::IsMember({1, 2}));
    q_cmd->add_option("--q", q_q)->required();

    // scale
    auto* sc_cmd = app.add_subcommand("scale", "centering/scaling constants");
    int sc_n = 0, sc_p = 0;
    std::string sc_variant = "second";
    sc_cmd->add_option("--n", sc_n)->required();
    sc_cmd->add_option("--p", sc_p)->required();
    sc_cmd->add_option("--variant", sc_variant)
        ->check(CLI::IsMember({"orig", "second", "log", "small-log"}));

    // pvalue
    auto* pv_cmd = app.add_subcommand("pvalue", "tail probability for an observed eigenvalue");
    int pv_n = 0, pv_p = 0;
    double pv_lambda = 0.0;
    std::string pv_variant = "second";
    pv_cmd->add_option("--n", pv_n)->required();
    pv_cmd->add_option("--p", pv_p)->required();
    pv_cmd->add_option("--lambda", pv_lambda)->required();
    pv_cmd->add_option("--variant", pv_variant)
        ->check(CLI::IsMember({"orig", "second", "log", "small-log"}));

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo empirical CDF report");
    int sim_n = 0, sim_p = 0;
    long sim_reps = 40000;
    std::uint64_t sim_seed = 1;
    std::string sim_variant = "second";
    std::string sim_which = "largest";
    std::string sim_points;
    sim_cmd->add_option("--n", sim_n)->required();
    sim_cmd->add_option("--p", sim_p)->required();
    sim_cmd->add_option("--reps", sim_reps);
    sim_cmd->add_option("--seed", sim_seed);
    sim_cmd->add_option("--variant", sim_variant)
        ->check(CLI::IsMember({"orig", "second", "log", "small-log"}));
    sim_cmd->add_option("--which", sim_which)->check(CLI::IsMember({"largest", "smallest"}));
    sim_cmd->add_option("--points", sim_points, "comma-separated rescaled thresholds");

    // table1 / table2
    auto* t1_cmd = app.add_subcommand("table1", "largest-eigenvalue table rows");
    std::string t1_rows;
    long t1_reps = 40000;
    std::uint64_t t1_seed = 1;
    std::string t1_variant = "second";
    t1_cmd->add_option("--rows", t1_rows, "comma-separated NxP sizes")->required();
    t1_cmd->add_option("--reps", t1_reps);
    t1_cmd->add_option("--seed", t1_seed);
    t1_cmd->add_option("--variant", t1_variant)->check(CLI::IsMember({"orig", "second", "log"}));

    auto* t2_cmd = app.add_subcommand("table2", "smallest-eigenvalue table rows (log scale)");
    std::string t2_rows;
    long t2_reps = 40000;
    std::uint64_t t2_seed = 1;
    t2_cmd->add_option("--rows", t2_rows, "comma-separated NxP sizes")->required();
    t2_cmd->add_option("--reps", t2_reps);
    t2_cmd->add_option("--seed", t2_seed);

    // relerr
    auto* re_cmd = app.add_subcommand("relerr", "Tracy-Widom percentile relative error vs MC");
    int re_n = 0, re_p = 0;
    double re_alpha = 0.95;
    long re_reps = 200000;
    std::uint64_t re_seed = 1;
    re_cmd->add_option("--n", re_n)->required();
    re_cmd->add_option("--p", re_p)->required();
    re_cmd->add_option("--alpha", re_alpha);
    re_cmd->add_option("--reps", re_reps);
    re_cmd->add_option("--seed", re_seed);

    // asym-check
    auto* as_cmd = app.add_subcommand("asym-check", "Airy-approximation error ladder");
    std::string as_rungs = "10,20,40,80";
    double as_smin = -4.0, as_smax = 4.0, as_step = 0.25;
    as_cmd->add_option("--rungs", as_rungs, "comma-separated N values (n = 2N+1)");
    as_cmd->add_option("--smin", as_smin);
    as_cmd->add_option("--smax", as_smax);
    as_cmd->add_option("--step", as_step);

    // kernel-check
    auto* kc_cmd = app.add_subcommand("kernel-check", "LOE kernel route agreement on an edge grid");
    int kc_n = 0, kc_N = 0;
    double kc_span = 1.0;
    kc_cmd->add_option("--n", kc_n)->required();
    kc_cmd->add_option("--N", kc_N)->required();
    kc_cmd->add_option("--span", kc_span, "grid spacing in units of sigma~");

    // global flags remain usable after the subcommand name
    for (CLI::App* sub : {cdf_cmd, q_cmd, sc_cmd, pv_cmd, sim_cmd, t1_cmd, t2_cmd, re_cmd, as_cmd,
                          kc_cmd})
        sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("rmtedge");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    const bool json = format == "json";
    const Sink sink{out, out_path};

    try {
        if (*cdf_cmd) {
            const double v = cdf_reflected ? reflected_cdf(cdf_s)
                                           : tw_cdf(static_cast<TwBeta>(cdf_beta), cdf_s);
            if (json) {
                nlohmann::json j{{"beta", cdf_beta}, {"s", cdf_s}, {"reflected", cdf_reflected},
                                 {"cdf", v}};
                sink.write(j.dump() + "\n");
            } else {
                sink.write("beta,s,reflected,cdf\n" + std::to_string(cdf_beta) + "," + fmt(cdf_s, 4) +
                           "," + (cdf_reflected ? "1" : "0") + "," + fmt(v, 6) + "\n");
            }
        } else if (*q_cmd) {
            const double v = tw_quantile(static_cast<TwBeta>(q_beta), q_q);
            if (json) {
                nlohmann::json j{{"beta", q_beta}, {"q", q_q}, {"quantile", v}};
                sink.write(j.dump() + "\n");
            } else {
                sink.write("beta,q,quantile\n" + std::to_string(q_beta) + "," + fmt(q_q, 6) + "," +
                           fmt(v, 4) + "\n");
            }
        } else if (*sc_cmd) {
            const Variant var = variant_from_name(sc_variant.c_str());
            ScalePair c;
            switch (var) {
                case Variant::Original: c = johnstone_constants(sc_n, sc_p); break;
                case Variant::SecondOrder: c = second_order_constants(sc_n, sc_p); break;
                case Variant::LogLargest: c = log_constants(sc_n, sc_p); break;
                case Variant::LogSmallest: c = smallest_log_constants(sc_n, sc_p); break;
            }
            if (json) {
                nlohmann::json j{{"n", sc_n}, {"p", sc_p}, {"variant", sc_variant},
                                 {"center", c.center}, {"scale", c.scale}};
                sink.write(j.dump() + "\n");
            } else {
                sink.write("n,p,variant,center,scale\n" + std::to_string(sc_n) + "," +
                           std::to_string(sc_p) + "," + sc_variant + "," + fmt_g(c.center) + "," +
                           fmt_g(c.scale) + "\n");
            }
        } else if (*pv_cmd) {
            if (const auto warning = warn_theory_gap(pv_n, pv_p)) err << *warning << "\n";
            const Variant var = variant_from_name(pv_variant.c_str());
            const double v = var == Variant::LogSmallest
                                 ? smallest_pvalue(pv_n, pv_p, pv_lambda)
                                 : largest_pvalue(pv_n, pv_p, pv_lambda, var);
            if (json) {
                nlohmann::json j{{"n", pv_n}, {"p", pv_p}, {"lambda", pv_lambda},
                                 {"variant", pv_variant}, {"pvalue", v}};
                sink.write(j.dump() + "\n");
            } else {
                sink.write("n,p,lambda,variant,pvalue\n" + std::to_string(pv_n) + "," +
                           std::to_string(pv_p) + "," + fmt_g(pv_lambda) + "," + pv_variant + "," +
                           fmt(v, 6) + "\n");
            }
        } else if (*sim_cmd) {
            if (const auto warning = warn_theory_gap(sim_n, sim_p)) err << *warning << "\n";
            const Variant var = variant_from_name(sim_variant.c_str());
            const Which which = which_from_name(sim_which.c_str());
            std::vector<double> pts;
            if (!sim_points.empty()) {
                pts = parse_points(sim_points);
            } else {
                const auto& def = var == Variant::LogSmallest ? table2_percentiles() : table1_percentiles();
                pts.assign(def.begin(), def.end());
            }
            const McReport rep = mc_cdf_at(sim_n, sim_p, sim_reps, sim_seed, pts, var, which);
            sink.write(json ? to_json(rep) + "\n" : to_csv(rep));
        } else if (*t1_cmd || *t2_cmd) {
            const bool is_t2 = static_cast<bool>(*t2_cmd);
            const Variant var = is_t2 ? Variant::LogSmallest
                                      : variant_from_name(t1_variant.c_str());
            const auto rows = parse_rows(is_t2 ? t2_rows : t1_rows);
            const long reps = is_t2 ? t2_reps : t1_reps;
            const std::uint64_t seed = is_t2 ? t2_seed : t1_seed;
            const char* names[9] = {"q01", "q05", "q10", "q30", "q50", "q70", "q90", "q95", "q99"};
            std::ostringstream csv;
            nlohmann::json jrows = nlohmann::json::array();
            csv << "n,p";
            for (const char* name : names) csv << ',' << name;
            csv << "\n";
            for (const auto& [n, p] : rows) {
                if (const auto warning = warn_theory_gap(n, p)) err << *warning << "\n";
                const McReport rep = table_row(n, p, reps, seed, var);
                csv << n << ',' << p;
                nlohmann::json obj{{"n", n}, {"p", p}};
                for (size_t i = 0; i < rep.rows.size(); ++i) {
                    csv << ',' << fmt(rep.rows[i].empirical_cdf, 6);
                    obj[names[i]] = std::stod(fmt(rep.rows[i].empirical_cdf, 6));
                }
                csv << "\n";
                jrows.push_back(std::move(obj));
            }
            sink.write(json ? jrows.dump() + "\n" : csv.str());
        } else if (*re_cmd) {
            const double v = mc_percentile_relative_error(re_n, re_p, re_reps, re_alpha, re_seed);
            if (json) {
                nlohmann::json j{{"n", re_n}, {"p", re_p}, {"alpha", re_alpha}, {"reps", re_reps},
                                 {"seed", re_seed}, {"rel_err", v}};
                sink.write(j.dump() + "\n");
            } else {
                sink.write("n,p,alpha,reps,rel_err\n" + std::to_string(re_n) + "," +
                           std::to_string(re_p) + "," + fmt(re_alpha, 4) + "," +
                           std::to_string(re_reps) + "," + fmt(v, 6) + "\n");
            }
        } else if (*as_cmd) {
            const std::vector<int> rungs = parse_ints(as_rungs);
            std::vector<double> grid;
            for (double s = as_smin; s <= as_smax + 1e-9; s += as_step) grid.push_back(s);
            std::ostringstream csv;
            nlohmann::json jrows = nlohmann::json::array();
            csv << "N,n,sup_psi,sup_dpsi,sup_phi,sup_dphi,scaled_by_N23\n";
            for (const int N : rungs) {
                const int n = 2 * N + 1;
                const LemmaProfile prof = lemma_error_profile(n, N, grid);
                const double worst =
                    std::max({prof.sup_psi, prof.sup_dpsi, prof.sup_phi, prof.sup_dphi});
                const double scaled = std::pow(static_cast<double>(N), 2.0 / 3.0) * worst;
                csv << N << ',' << n << ',' << fmt_g(prof.sup_psi) << ',' << fmt_g(prof.sup_dpsi)
                    << ',' << fmt_g(prof.sup_phi) << ',' << fmt_g(prof.sup_dphi) << ','
                    << fmt_g(scaled) << "\n";
                jrows.push_back({{"N", N}, {"n", n}, {"sup_psi", prof.sup_psi},
                                 {"sup_dpsi", prof.sup_dpsi}, {"sup_phi", prof.sup_phi},
                                 {"sup_dphi", prof.sup_dphi}, {"scaled_by_N23", scaled}});
            }
            sink.write(json ? jrows.dump() + "\n" : csv.str());
        } else if (*kc_cmd) {
            const ScalePair c = second_order_constants(kc_n, kc_N);
            std::ostringstream csv;
            nlohmann::json jrows = nlohmann::json::array();
            csv << "x,y,s1_central,s1_alt,abs_diff\n";
            for (int i = -1; i <= 1; ++i) {
                for (int j = -1; j <= 1; ++j) {
                    const double x = c.center + kc_span * c.scale * i;
                    const double y = c.center + kc_span * c.scale * j;
                    const double a = s1_kernel_central(kc_n, kc_N, x, y);
                    const double b = s1_kernel_alt(kc_n, kc_N, x, y);
                    csv << fmt_g(x) << ',' << fmt_g(y) << ',' << fmt_g(a) << ',' << fmt_g(b) << ','
                        << fmt_g(std::abs(a - b)) << "\n";
                    jrows.push_back({{"x", x}, {"y", y}, {"s1_central", a}, {"s1_alt", b},
                                     {"abs_diff", std::abs(a - b)}});
                }
            }
            sink.write(json ? jrows.dump() + "\n" : csv.str());
        }
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace rmtedge
