// nct: command-line front end for the noncentral t library.
//
// Subcommands: cdf, pdf, quantile, solve-delta, solve-nu, table, integrand,
// bench.  Human output uses shortest round-trip decimals; --json emits one
// object per line with fixed 17-significant-digit scientific notation.
// Exit codes: 0 success, 1 table-check failure, 2 usage, 3 numeric failure.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nct/nct.hpp"

namespace {

// ----------------------------------------------------------------- formatting
std::string fmt_short(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string fmt_json(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

long now_ns_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

std::string tail_tag(const nct::TailProbability& t, double x) {
    std::string s = nct::to_string(t.native_tail);
    if (x < 0.0 && t.native_tail != nct::TailSide::Exact) s += "-after-reflection";
    return s;
}

// --------------------------------------------------------------- config knobs
struct ConfigFlags {
    int n_subs = -1;       // -1: unset
    double eps_r = -1.0;   // <0: unset
};

// flag wins over NCT_N_SUBS, which wins over the library default; an explicit
// flag makes the env var irrelevant, so it is not even validated then
nct::ToleranceConfig make_config(const ConfigFlags& f) {
    double eps_r = f.eps_r > 0.0 ? f.eps_r : 1e-16;
    int n_subs = 16;
    if (f.n_subs > 0) {
        n_subs = f.n_subs;
    } else if (const char* env = std::getenv("NCT_N_SUBS")) {
        std::string s(env);
        int v = 0;
        auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size() || v < 1)
            throw CLI::ValidationError("NCT_N_SUBS", "must be a positive integer");
        n_subs = v;
    }
    return nct::ToleranceConfig(eps_r, n_subs);
}

// ------------------------------------------------------------------ cdf / pdf
void print_cdf_record(double x, double nu, double delta, const nct::TailProbability& t,
                      long wall_ns, bool json) {
    if (json) {
        std::cout << "{\"x\":" << fmt_json(x) << ",\"nu\":" << fmt_json(nu)
                  << ",\"delta\":" << fmt_json(delta) << ",\"lower\":" << fmt_json(t.lower)
                  << ",\"upper\":" << fmt_json(t.upper) << ",\"native_tail\":\""
                  << tail_tag(t, x) << "\",\"quad_error\":" << fmt_json(t.quad_error)
                  << ",\"wall_ns\":" << wall_ns << "}\n";
    } else {
        std::cout << "x=" << fmt_short(x) << " nu=" << fmt_short(nu)
                  << " delta=" << fmt_short(delta) << " lower=" << fmt_short(t.lower)
                  << " upper=" << fmt_short(t.upper) << " native_tail=" << tail_tag(t, x)
                  << " quad_error=" << fmt_short(t.quad_error) << " wall_ns=" << wall_ns
                  << "\n";
    }
}

int run_cdf_one(double x, double nu, double delta, const nct::ToleranceConfig& cfg, bool json) {
    auto t0 = std::chrono::steady_clock::now();
    nct::TailProbability t = nct::cdf(x, nu, delta, cfg);
    print_cdf_record(x, nu, delta, t, now_ns_since(t0), json);
    return 0;
}

// CSV rows x,nu,delta; header optional; '-' reads standard input
int run_cdf_batch(const std::string& path, const nct::ToleranceConfig& cfg, bool json) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (path != "-") {
        file.open(path);
        if (!file) throw CLI::ValidationError("--batch", "cannot open " + path);
        in = &file;
    }
    std::string line;
    bool first = true;
    while (std::getline(*in, line)) {
        if (line.empty() || line[0] == '#') continue;
        bool has_alpha = line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos;
        if (first && has_alpha) {
            first = false;
            continue;  // header row
        }
        first = false;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, nu, delta;
        if (!(ls >> x >> nu >> delta))
            throw CLI::ValidationError("--batch", "bad CSV row: " + line);
        run_cdf_one(x, nu, delta, cfg, json);
    }
    return 0;
}

// ---------------------------------------------------------------------- table
int run_table(double tol, const nct::ToleranceConfig& cfg) {
    int pass = 0, n = 0;
    for (const nct::GoldRow& row : nct::kGoldTable) {
        ++n;
        nct::TailProbability t = nct::cdf(row.x, row.nu, row.delta, cfg);
        double rel = std::abs(t.lower - row.lower) / std::abs(row.lower);
        bool ok = rel <= tol;
        pass += ok;
        std::printf("row %2d: x=%-7g nu=%-6g delta=%-6g computed=%.16e gold=%.16e rel=%.3e %s\n",
                    n, row.x, row.nu, row.delta, t.lower, row.lower, rel,
                    ok ? "PASS" : "FAIL");
    }
    std::printf("%d/%d rows within %g\n", pass, n, tol);
    return pass == n ? 0 : 1;
}

// ------------------------------------------------------------------ integrand
int run_integrand(double x, double nu, double delta, const nct::ToleranceConfig& cfg) {
    // the dump reflects the problem actually integrated (x < 0 evaluates at
    // (-x, nu, -delta) per the reflection identity)
    nct::NctParams p(x < 0.0 ? -x : x, nu, x < 0.0 ? -delta : delta);
    nct::IntegrationWindow w = nct::window(p, cfg);
    const bool upper = w.tail == nct::TailSide::Upper;
    nct::QuadratureRule rule = nct::gk15_rule();

    std::vector<double> edges;
    double pw = (w.b - w.a) / cfg.n_subs;
    edges.push_back(w.a);
    if (w.graded && pw > 0.0)
        for (int k = nct::GRADE_LEVELS; k >= 1; --k) edges.push_back(w.a + std::ldexp(pw, -k));
    for (int i = 1; i < cfg.n_subs; ++i) edges.push_back(w.a + i * pw);
    edges.push_back(w.b);

    std::printf("z,g\n");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double c = 0.5 * (edges[i] + edges[i + 1]);
        double h = 0.5 * (edges[i + 1] - edges[i]);
        for (int j = 0; j < 15; ++j) {
            double z = c + h * rule.kronrod_nodes[j];
            double g = upper ? nct::integrand_g_upper(z, p) : nct::integrand_g(z, p);
            std::printf("%.16e,%.16e\n", z, g);
        }
    }
    nct::TailProbability t = nct::cdf(x, nu, delta, cfg);
    std::printf("# A=%.16e B=%.16e analytic_head=%.16e CDF=%.16e\n", w.a, w.b, w.analytic_head,
                t.lower);
    return 0;
}

// ---------------------------------------------------------------------- bench
std::vector<double> linspace(double from, double to, int count) {
    std::vector<double> v;
    if (count <= 0) return v;
    if (count == 1) {
        v.push_back(from);
        return v;
    }
    for (int i = 0; i < count; ++i) v.push_back(from + (to - from) * i / (count - 1));
    return v;
}

int run_bench(const std::vector<double>& xs, const std::vector<double>& nus,
              const std::vector<double>& deltas, int reps, const nct::ToleranceConfig& cfg) {
    std::printf("x,nu,delta,median_ns,lower\n");
    long total_evals = 0;
    double total_ns = 0.0;
    for (double x : xs)
        for (double nu : nus)
            for (double delta : deltas) {
                std::vector<long> times(reps);
                double lower = 0.0;
                for (int r = 0; r < reps; ++r) {
                    auto t0 = std::chrono::steady_clock::now();
                    lower = nct::cdf(x, nu, delta, cfg).lower;
                    times[r] = now_ns_since(t0);
                }
                std::nth_element(times.begin(), times.begin() + reps / 2, times.end());
                long med = times[reps / 2];
                total_evals += reps;
                for (long t : times) total_ns += static_cast<double>(t);
                std::printf("%.16e,%.16e,%.16e,%ld,%.16e\n", x, nu, delta, med, lower);
            }
    double per_s = total_ns > 0.0 ? 1e9 * static_cast<double>(total_evals) / total_ns : 0.0;
    std::printf("# total_evals=%ld wall_ms=%.3f throughput_per_s=%.0f\n", total_evals,
                total_ns / 1e6, per_s);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noncentral t-distribution: direct-quadrature CDF and friends"};
    app.require_subcommand(1);

    ConfigFlags cf;
    bool json = false;
    double x = 0.0, nu = 0.0, delta = 0.0, prob = 0.0;
    std::string batch;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--n-subs", cf.n_subs, "uniform panel count (default 16)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--eps-r", cf.eps_r, "relative tolerance eps_R (default 1e-16)");
    };

    CLI::App* c_cdf = app.add_subcommand("cdf", "lower/upper tail CDF at x");
    c_cdf->add_option("--x", x, "evaluation point");
    c_cdf->add_option("--nu", nu, "degrees of freedom");
    c_cdf->add_option("--delta", delta, "noncentrality");
    c_cdf->add_option("--batch", batch, "CSV x,nu,delta rows; '-' for stdin");
    c_cdf->add_flag("--json", json, "JSON-lines output");
    add_config(c_cdf);

    CLI::App* c_pdf = app.add_subcommand("pdf", "density at x");
    c_pdf->add_option("--x", x, "evaluation point")->required();
    c_pdf->add_option("--nu", nu, "degrees of freedom")->required();
    c_pdf->add_option("--delta", delta, "noncentrality")->required();
    c_pdf->add_flag("--json", json, "JSON-lines output");
    add_config(c_pdf);

    CLI::App* c_q = app.add_subcommand("quantile", "x with cdf(x) = p");
    c_q->add_option("--p", prob, "target lower-tail probability")->required();
    c_q->add_option("--nu", nu, "degrees of freedom")->required();
    c_q->add_option("--delta", delta, "noncentrality")->required();
    c_q->add_flag("--json", json, "JSON-lines output");
    add_config(c_q);

    CLI::App* c_sd = app.add_subcommand("solve-delta", "delta with cdf(x,nu,delta) = p");
    c_sd->add_option("--x", x, "evaluation point")->required();
    c_sd->add_option("--nu", nu, "degrees of freedom")->required();
    c_sd->add_option("--p", prob, "target lower-tail probability")->required();
    c_sd->add_flag("--json", json, "JSON-lines output");
    add_config(c_sd);

    CLI::App* c_sn = app.add_subcommand("solve-nu", "nu with cdf(x,nu,delta) = p");
    c_sn->add_option("--x", x, "evaluation point")->required();
    c_sn->add_option("--delta", delta, "noncentrality")->required();
    c_sn->add_option("--p", prob, "target lower-tail probability")->required();
    c_sn->add_flag("--json", json, "JSON-lines output");
    add_config(c_sn);

    double tol = 1e-12;
    CLI::App* c_table = app.add_subcommand("table", "check the built-in 17-row gold table");
    c_table->add_option("--tol", tol, "per-row relative tolerance (default 1e-12)");
    add_config(c_table);

    CLI::App* c_int = app.add_subcommand("integrand", "dump integrand values at the quadrature nodes");
    c_int->add_option("--x", x, "evaluation point (nonzero)")->required();
    c_int->add_option("--nu", nu, "degrees of freedom")->required();
    c_int->add_option("--delta", delta, "noncentrality")->required();
    add_config(c_int);

    double xf = 1.0, xt = 1.0, nf = 10.0, nt = 10.0, df = 5.0, dt = 5.0;
    int xc = 1, nc = 1, dc = 1, reps = 32;
    CLI::App* c_bench = app.add_subcommand("bench", "median timing over a parameter sweep");
    c_bench->add_option("--x-from", xf, "x sweep start");
    c_bench->add_option("--x-to", xt, "x sweep end");
    c_bench->add_option("--x-count", xc, "x sweep points (0 = empty sweep)");
    c_bench->add_option("--nu-from", nf, "nu sweep start");
    c_bench->add_option("--nu-to", nt, "nu sweep end");
    c_bench->add_option("--nu-count", nc, "nu sweep points");
    c_bench->add_option("--delta-from", df, "delta sweep start");
    c_bench->add_option("--delta-to", dt, "delta sweep end");
    c_bench->add_option("--delta-count", dc, "delta sweep points");
    c_bench->add_option("--reps", reps, "repetitions per cell (minimum 32)")
        ->check(CLI::Range(32, 1 << 20));
    add_config(c_bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);          // prints help or error message
        return rc == 0 ? 0 : 2;       // usage failures map to exit 2
    }

    try {
        nct::ToleranceConfig cfg = make_config(cf);
        if (c_cdf->parsed()) {
            if (!batch.empty()) return run_cdf_batch(batch, cfg, json);
            if (!c_cdf->count("--x") || !c_cdf->count("--nu") || !c_cdf->count("--delta")) {
                std::cerr << "cdf: need --x, --nu, --delta (or --batch)\n";
                return 2;
            }
            return run_cdf_one(x, nu, delta, cfg, json);
        }
        if (c_pdf->parsed()) {
            auto t0 = std::chrono::steady_clock::now();
            double v = nct::pdf(x, nu, delta, cfg);
            long ns = now_ns_since(t0);
            if (json)
                std::cout << "{\"x\":" << fmt_json(x) << ",\"nu\":" << fmt_json(nu)
                          << ",\"delta\":" << fmt_json(delta) << ",\"pdf\":" << fmt_json(v)
                          << ",\"wall_ns\":" << ns << "}\n";
            else
                std::cout << "x=" << fmt_short(x) << " nu=" << fmt_short(nu)
                          << " delta=" << fmt_short(delta) << " pdf=" << fmt_short(v)
                          << " wall_ns=" << ns << "\n";
            return 0;
        }
        if (c_q->parsed()) {
            auto t0 = std::chrono::steady_clock::now();
            double v = nct::quantile(prob, nu, delta, cfg);
            long ns = now_ns_since(t0);
            if (json)
                std::cout << "{\"p\":" << fmt_json(prob) << ",\"nu\":" << fmt_json(nu)
                          << ",\"delta\":" << fmt_json(delta) << ",\"x\":" << fmt_json(v)
                          << ",\"wall_ns\":" << ns << "}\n";
            else
                std::cout << "p=" << fmt_short(prob) << " nu=" << fmt_short(nu)
                          << " delta=" << fmt_short(delta) << " x=" << fmt_short(v)
                          << " wall_ns=" << ns << "\n";
            return 0;
        }
        if (c_sd->parsed()) {
            auto t0 = std::chrono::steady_clock::now();
            double v = nct::solve_delta(x, nu, prob, cfg);
            long ns = now_ns_since(t0);
            if (json)
                std::cout << "{\"x\":" << fmt_json(x) << ",\"nu\":" << fmt_json(nu)
                          << ",\"p\":" << fmt_json(prob) << ",\"delta\":" << fmt_json(v)
                          << ",\"wall_ns\":" << ns << "}\n";
            else
                std::cout << "x=" << fmt_short(x) << " nu=" << fmt_short(nu)
                          << " p=" << fmt_short(prob) << " delta=" << fmt_short(v)
                          << " wall_ns=" << ns << "\n";
            return 0;
        }
        if (c_sn->parsed()) {
            auto t0 = std::chrono::steady_clock::now();
            double v = nct::solve_nu(x, delta, prob, cfg);
            long ns = now_ns_since(t0);
            if (json)
                std::cout << "{\"x\":" << fmt_json(x) << ",\"delta\":" << fmt_json(delta)
                          << ",\"p\":" << fmt_json(prob) << ",\"nu\":" << fmt_json(v)
                          << ",\"wall_ns\":" << ns << "}\n";
            else
                std::cout << "x=" << fmt_short(x) << " delta=" << fmt_short(delta)
                          << " p=" << fmt_short(prob) << " nu=" << fmt_short(v)
                          << " wall_ns=" << ns << "\n";
            return 0;
        }
        if (c_table->parsed()) return run_table(tol, cfg);
        if (c_int->parsed()) {
            if (x == 0.0) {
                std::cerr << "integrand: x must be nonzero (x=0 is the closed form)\n";
                return 2;
            }
            return run_integrand(x, nu, delta, cfg);
        }
        if (c_bench->parsed())
            return run_bench(linspace(xf, xt, xc), linspace(nf, nt, nc), linspace(df, dt, dc),
                             reps, cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const nct::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what()
                  << " (best_value=" << fmt_json(e.best_value)
                  << ", best_estimate=" << fmt_json(e.best_estimate) << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
