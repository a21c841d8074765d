#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rmtedge/cli.hpp"
#include "rmtedge/ensemble.hpp"
#include "rmtedge/scaling.hpp"
#include "rmtedge/twlimit.hpp"

using namespace rmtedge;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

double last_field(const std::string& text) {
    // value in the last comma-separated field of the last non-empty line
    std::istringstream in(text);
    std::string line, keep;
    while (std::getline(in, line))
        if (!line.empty()) keep = line;
    const size_t pos = keep.find_last_of(',');
    return std::stod(keep.substr(pos + 1));
}

} // namespace

TEST_CASE("warn_theory_gap") {
    CHECK(warn_theory_gap(5, 5).has_value());    // n = p
    CHECK(warn_theory_gap(20, 5).has_value());   // p odd
    CHECK(warn_theory_gap(100, 100).has_value());
    CHECK(!warn_theory_gap(8, 2).has_value());
    CHECK(!warn_theory_gap(400, 100).has_value());
}

TEST_CASE("quantile subcommand") {
    const RunResult r = run({"quantile", "--beta", "1", "--q", "0.99"});
    CHECK(r.code == 0);
    CHECK(std::abs(last_field(r.out) - 2.0234) < 5e-3);
}

TEST_CASE("cdf subcommand, reflected flag") {
    const RunResult r = run({"cdf", "--beta", "1", "--s", "-1.2686"});
    CHECK(r.code == 0);
    CHECK(std::abs(last_field(r.out) - 0.50) < 2e-3);
    const RunResult g = run({"cdf", "--s", "3.8954", "--reflected"});
    CHECK(g.code == 0);
    CHECK(std::abs(last_field(g.out) - 0.99) < 2e-3);
}

TEST_CASE("pvalue subcommand composes the table header") {
    const ScalePair c = second_order_constants(100, 100);
    char lambda[64];
    std::snprintf(lambda, sizeof(lambda), "%.12f", c.center + 2.0234 * c.scale);
    const RunResult r = run({"pvalue", "--n", "100", "--p", "100", "--lambda", lambda});
    CHECK(r.code == 0);
    CHECK(std::abs(last_field(r.out) - 0.0100) < 3e-3);
    // n = p: outside the proof's regime, note expected on stderr
    CHECK(r.err.find("note:") != std::string::npos);
    const RunResult q = run({"pvalue", "--n", "8", "--p", "2", "--lambda", "30", "--variant", "orig"});
    CHECK(q.code == 0);
    CHECK(q.err.empty());
}

TEST_CASE("scale subcommand emits the pair") {
    const RunResult r = run({"scale", "--n", "4", "--p", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("9.5825756") != std::string::npos);
}

TEST_CASE("table1 emits monotone probabilities") {
    const RunResult r = run({"table1", "--rows", "2x2", "--reps", "1000", "--seed", "7"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "n,p,q01,q05,q10,q30,q50,q70,q90,q95,q99");
    std::getline(in, row);
    std::istringstream fields(row);
    std::string item;
    std::vector<double> vals;
    while (std::getline(fields, item, ',')) vals.push_back(std::stod(item));
    REQUIRE(vals.size() == 11);
    for (size_t i = 3; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1 < 2 ? 2 : i - 1]);
}

TEST_CASE("simulate json round-trips through the report parser") {
    const RunResult r = run({"--format", "json", "simulate", "--n", "10", "--p", "4", "--reps",
                             "200", "--seed", "3"});
    CHECK(r.code == 0);
    const McReport rep = report_from_json(r.out);
    CHECK(rep.n == 10);
    CHECK(rep.p == 4);
    CHECK(rep.reps == 200);
    CHECK(rep.rows.size() == 9);
    const McReport direct = mc_cdf_at(10, 4, 200, 3,
                                      std::vector<double>(table1_percentiles().begin(),
                                                          table1_percentiles().end()),
                                      Variant::SecondOrder, Which::Largest);
    for (size_t i = 0; i < 9; ++i)
        CHECK(std::abs(rep.rows[i].empirical_cdf - direct.rows[i].empirical_cdf) < 1e-6);
}

TEST_CASE("simulate csv round-trips") {
    const RunResult r = run({"simulate", "--n", "10", "--p", "4", "--reps", "150", "--seed", "9",
                             "--which", "smallest", "--variant", "small-log"});
    CHECK(r.code == 0);
    const McReport rep = report_from_csv(r.out);
    CHECK(rep.which == Which::Smallest);
    CHECK(rep.variant == Variant::LogSmallest);
    CHECK(rep.rows.size() == 9);
}

TEST_CASE("identical seeds give identical output") {
    const RunResult a = run({"simulate", "--n", "6", "--p", "3", "--reps", "300", "--seed", "11"});
    const RunResult b = run({"simulate", "--n", "6", "--p", "3", "--reps", "300", "--seed", "11"});
    CHECK(a.out == b.out);
    const RunResult c = run({"simulate", "--n", "6", "--p", "3", "--reps", "300", "--seed", "12"});
    CHECK(a.out != c.out);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"quantile", "--beta", "1", "--q", "0.5", "--bogus"}).code == 2);
    CHECK(run({"quantile", "--beta", "3", "--q", "0.5"}).code == 2);
    CHECK(run({"pvalue", "--n", "5", "--p", "6", "--lambda", "1", "--variant", "small-log"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"simulate", "--n", "4", "--p", "2", "--reps", "10", "--points", "1.0,0.5"}).code == 2);
}

TEST_CASE("numeric failures exit with 3") {
    // quantile outside the tabulated range refuses to extrapolate
    CHECK(run({"quantile", "--beta", "1", "--q", "0.99999999"}).code == 3);
}

TEST_CASE("--out writes the report to a file, stdout stays clean") {
    const std::string path = "cli_out_test.csv";
    const RunResult r = run({"--out", path, "scale", "--n", "10", "--p", "5"});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string line;
    std::getline(f, line);
    CHECK(line == "n,p,variant,center,scale");
    f.close();
    std::remove(path.c_str());
}

TEST_CASE("kernel-check reports agreement on the edge grid") {
    const RunResult r = run({"kernel-check", "--n", "13", "--N", "6"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,s1_central,s1_alt,abs_diff");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(last_field(line + "\n") <= 1e-5);
    }
    CHECK(rows == 9);
}

TEST_CASE("table cache honored through the environment variable") {
    const std::string cache = "tw_env_cache_test.csv";
    std::remove(cache.c_str());
    const std::string base = std::string("RMT_EDGE_TABLE_CACHE=") + cache + " " + RMTEDGE_BIN +
                             " cdf --beta 1 --s -1.2686 2>/dev/null";
    CHECK(std::system((base + " > cli_env_a.txt").c_str()) == 0);
    {
        std::ifstream f(cache);
        REQUIRE(f.good()); // first run populated the cache
    }
    const TwTable cached = load_table(cache);
    cached.validate(true);
    CHECK(cached.beta == TwBeta::Orthogonal);
    CHECK(std::system((base + " > cli_env_b.txt").c_str()) == 0);
    std::ifstream a("cli_env_a.txt"), b("cli_env_b.txt");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str()); // warm-cache run reproduces the cold one
    CHECK(sa.str().find("0.4999") != std::string::npos);
    std::remove(cache.c_str());
    std::remove("cli_env_a.txt");
    std::remove("cli_env_b.txt");
}

TEST_CASE("asym-check ladder output") {
    const RunResult r = run({"asym-check", "--rungs", "10,20", "--step", "1.0"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "N,n,sup_psi,sup_dpsi,sup_phi,sup_dphi,scaled_by_N23");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
}
