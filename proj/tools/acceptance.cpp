// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmrelax/cli.hpp"
#include "rmrelax/dynamics_limit.hpp"
#include "rmrelax/finite_n.hpp"
#include "rmrelax/output.hpp"
#include "rmrelax/selfconsistent.hpp"
#include "rmrelax/vanhove.hpp"

using namespace rmrelax;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

TwoLevelState generic_state() {
    Eigen::Matrix2cd r;
    r << 0.7, cplx(0.1, 0.3), cplx(0.1, -0.3), 0.3;
    return TwoLevelState::validated(r);
}

ModelParams flat(double s, double v) { return {s, v, SpectralMeasure::uniform(-1, 1)}; }

Verdict self_averaging() {
    Verdict out;
    double worst = 0;
    for (std::size_t n : {50, 100, 200}) {
        const FiniteModel fm = FiniteModel::build(flat(0.25, 1.0), n, 0.0, 1000 + n);
        const std::vector<double> times{0.5, 1.0, 2.0};
        const EnsembleStats st = ensemble_run(fm, generic_state(), times, 200);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double bound = 8 * times[i] * times[i] / double(n);
            const double r = st.variance[i].maxCoeff() / bound;
            worst = std::max(worst, r);
            if (!(st.variance[i].maxCoeff() < bound)) out.pass = false;
        }
    }
    out.detail = "max variance / bound = " + num(worst);
    return out;
}

double semicircle_cdf(double x) {
    if (x <= -2) return 0;
    if (x >= 2) return 1;
    return 0.5 + (x * std::sqrt(4 - x * x) / 2 + 2 * std::asin(x / 2)) / (2 * pi);
}

Verdict semicircle_oracle() {
    Verdict out;
    const ModelParams p{0.0, 1.0, SpectralMeasure::atoms({{0, 1}})};
    const StieltjesPair q = solve_pair(p, cplx(0, 1));
    const cplx exact(0, (std::sqrt(5.0) - 1) / 2);
    const double e1 = std::max(std::abs(q.f_plus - exact), std::abs(q.f_minus - exact));
    if (!(e1 <= 1e-10)) out.pass = false;

    std::vector<double> lambdas;
    for (int i = 0; i <= 1000; ++i) lambdas.push_back(-2.5 + 0.005 * i);
    const SpectralDensities d = spectral_densities(p, lambdas, 1e-7);
    double e2 = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double x = lambdas[i];
        const double rho = std::abs(x) < 2 ? std::sqrt(4 - x * x) / (2 * pi) : 0.0;
        e2 = std::max({e2, std::abs(d.nu_plus[i] - rho), std::abs(d.nu_minus[i] - rho)});
    }
    if (!(e2 <= 1e-3)) out.pass = false;

    const std::size_t n = 2000;
    const FiniteModel fm = FiniteModel::build(p, n, 0.0, 7);
    std::mt19937_64 rng(sample_seed(7, 0));
    const SampleEvolution ev(assemble_h(fm, sample_gue(n, rng)));
    std::vector<double> edges{-1e3};
    const Eigen::VectorXd& lam = ev.eigenvalues();
    for (Eigen::Index l = 0; l < lam.size(); ++l) edges.push_back(lam(l) + 1e-9);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges.push_back(1e3);
    const MatrixHistogram h = empirical_measure(ev, edges);
    double ks = 0;
    for (int a : {1, -1}) {
        double cum = 0;
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            cum += h(a, a)[b].real();
            const double right = edges[b + 1];
            ks = std::max(ks, std::abs(cum - semicircle_cdf(right)));
        }
    }
    if (!(ks <= 0.03)) out.pass = false;
    out.detail = "|f(i) - exact| = " + num(e1) + ", density error = " + num(e2) + ", Kolmogorov distance = " + num(ks);
    return out;
}

Verdict zero_coupling() {
    Verdict out;
    const auto rho0 = generic_state();
    const ModelParams p = flat(0.25, 0.0);
    double e_limit = 0, e_finite = 0;
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.5 * i;
        const TwoLevelState r = rho_limit(p, 0.0, t, rho0);
        for (int a : {1, -1})
            for (int d : {1, -1}) {
                const cplx expect = std::exp(cplx(0, -t * p.s * (a - d))) * rho0(a, d);
                e_limit = std::max(e_limit, std::abs(r(a, d) - expect));
            }
    }
    for (std::size_t n : {1, 7, 60}) {
        const FiniteModel fm = FiniteModel::build(p, n, 0.0, 5);
        std::mt19937_64 rng(n);
        const auto w = sample_gue(n, rng);
        for (double t : {0.0, 1.0, 4.0, 10.0}) {
            const TwoLevelState r = reduced_density(fm, w, rho0, t);
            for (int a : {1, -1})
                for (int d : {1, -1}) {
                    const cplx expect = std::exp(cplx(0, -t * p.s * (a - d))) * rho0(a, d);
                    e_finite = std::max(e_finite, std::abs(r(a, d) - expect));
                }
        }
    }
    out.pass = e_limit <= 1e-6 && e_finite <= 1e-10;
    out.detail = "limit error = " + num(e_limit) + ", finite-n error = " + num(e_finite);
    return out;
}

Verdict limit_vs_oracle(const fs::path& scratch) {
    Verdict out;
    nlohmann::json doc = nlohmann::json::parse(R"({
        "measure": {"type": "uniform", "a": -1, "b": 1}, "s": 0.25, "v": 0.4, "E": 0,
        "rho0": {"re": [1, 0, 0, 0]}, "samples": 50, "seed": 2024,
        "time": {"start": 0.5, "stop": 2, "points": 4}})");
    double dev[2];
    int codes[2];
    const std::size_t ns[2] = {100, 400};
    for (int k = 0; k < 2; ++k) {
        doc["n"] = ns[k];
        doc["output"] = (scratch / ("compare_" + std::to_string(ns[k]))).string();
        // Times 0.5, 1, 1.5, 2: the grid includes the required 0.5, 1, 2.
        const auto r = cli::run("compare", cli::parse_config(doc));
        dev[k] = r.manifest["diagnostics"]["max_deviation"].get<double>();
        codes[k] = r.exit_code;
    }
    out.pass = codes[1] == 0 && dev[1] <= 0.05 && dev[1] < dev[0];
    out.detail = "max deviation n=100: " + num(dev[0]) + ", n=400: " + num(dev[1]);
    return out;
}

Verdict delta_identity() {
    Verdict out;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-3, 3), im(0.05, 1.5);
    double worst = 0;
    const ModelParams ps[2] = {flat(0.25, 0.4), {0.3, 0.7, SpectralMeasure::semicircle(2)}};
    for (int k = 0; k < 100; ++k) {
        const ModelParams& p = ps[k % 2];
        const cplx z1(re(rng), im(rng)), z2(re(rng), -im(rng));
        const StieltjesPair q1 = solve_pair(p, z1), q2 = solve_pair(p, z2);
        for (int a : {1, -1}) {
            const cplx lhs = two_point(p, a, a, q1, q2) * (z1 - z2 + p.v * p.v * (q1.f(-a) - q2.f(-a)));
            worst = std::max(worst, std::abs(lhs - (q1.f(a) - q2.f(a))));
        }
    }
    out.pass = worst <= 1e-9;
    out.detail = "max |lhs - rhs| = " + num(worst);
    return out;
}

Verdict vanhove_identities() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    double trace = 0, init = 0;
    for (int k = 0; k < 1000; ++k) {
        VanHoveParams p;
        p.measure = k % 2 ? SpectralMeasure::semicircle(2) : SpectralMeasure::uniform(-1, 1);
        p.E = -2.5 + 5 * u(rng);
        p.s = 1.5 * u(rng);
        const double a = u(rng);
        const auto rho0 = TwoLevelState::diagonal(a, 1 - a);
        trace = std::max(trace, std::abs(rho_diag_vh(p, 5 * u(rng), rho0).sum() - 1));
        const auto x = rho_diag_vh(p, 0.0, rho0);
        init = std::max({init, std::abs(x(0) - a), std::abs(x(1) - (1 - a))});
    }
    return {trace <= 1e-12 && init <= 1e-12, "trace error = " + num(trace) + ", initial error = " + num(init)};
}

Verdict vanhove_consistency() {
    const double v = 0.1;
    const ModelParams mp = flat(0.25, v);
    VanHoveParams p;
    p.s = 0.25;
    p.measure = mp.measure;
    const auto rho0 = TwoLevelState::diagonal(1, 0);
    double worst = 0;
    for (int i = 0; i <= 10; ++i) {
        const double tau = 0.1 * i;
        const TwoLevelState full = rho_limit(mp, 0.0, tau / (v * v), rho0);
        const auto vh = rho_diag_vh(p, tau, rho0);
        worst = std::max({worst, std::abs(full(1, 1).real() - vh(0)), std::abs(full(-1, -1).real() - vh(1))});
    }
    return {worst <= 0.05, "max diagonal gap over tau in [0, 1] = " + num(worst)};
}

Verdict density_bound() {
    Verdict out;
    std::ostringstream os;
    for (double v : {0.2, 0.5}) {
        const ModelParams p = flat(0.25, v);
        const SpectralDensities d = spectral_densities(p, default_lambda_grid(p, 5e-4));
        const double top = std::max(*std::max_element(d.nu_plus.begin(), d.nu_plus.end()),
                                    *std::max_element(d.nu_minus.begin(), d.nu_minus.end()));
        const double mass = std::max(std::abs(d.mass_plus - 1), std::abs(d.mass_minus - 1));
        if (!(top <= 0.5 + 1e-6 && mass <= 1e-3)) out.pass = false;
        os << "v=" << v << ": max density " << num(top) << ", mass error " << num(mass) << "; ";
    }
    out.detail = os.str();
    out.detail.resize(out.detail.size() - 2);
    return out;
}

Verdict resolvent_variance() {
    const std::size_t n = 100, M = 100;
    const double v = 1.0;
    const FiniteModel fm = FiniteModel::build(flat(0.25, v), n, 0.0, 99);
    Eigen::Matrix2cd mean = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2d m2 = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < M; ++i) {
        std::mt19937_64 rng(sample_seed(fm.seed, i));
        const Eigen::Matrix2cd g = resolvent_trace(fm, sample_gue(n, rng), cplx(0, 2));
        const Eigen::Matrix2cd delta = g - mean;
        mean += delta / double(i + 1);
        m2 += delta.conjugate().cwiseProduct(g - mean).real();
    }
    const double var = (m2 / double(M - 1)).maxCoeff();
    const double bound = 2 * v * v / (double(n * n) * 16);
    return {var <= bound, "max variance " + num(var) + " vs bound " + num(bound)};
}

Verdict reproducibility(const fs::path& scratch) {
    nlohmann::json doc = nlohmann::json::parse(R"({
        "measure": {"type": "uniform", "a": -1, "b": 1}, "s": 0.25, "v": 0.4, "E": 0,
        "rho0": {"re": [0.7, 0.1, 0.1, 0.3], "im": [0, 0.3, -0.3, 0]}, "n": 30, "samples": 10, "seed": 11,
        "time": {"start": 0, "stop": 2, "points": 5}, "tau": {"start": 0, "stop": 1, "points": 6},
        "options": {"spacing": 0.02, "bins": 20, "threshold": 1.0}})");
    Verdict out;
    int identical = 0;
    for (const auto& sub : cli::subcommands()) {
        std::string sums[2];
        for (int k = 0; k < 2; ++k) {
            doc["output"] = (scratch / (sub + "_" + std::to_string(k))).string();
            const auto r = cli::run(sub, cli::parse_config(doc), true);
            sums[k] = r.manifest["files"].dump();
        }
        bool same = sums[0] == sums[1];
        for (const auto& e : fs::directory_iterator(scratch / (sub + "_0"))) {
            if (e.path().extension() != ".csv") continue;
            std::ifstream a(e.path(), std::ios::binary), b(scratch / (sub + "_1") / e.path().filename(), std::ios::binary);
            std::stringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            same = same && sa.str() == sb.str();
        }
        if (same) ++identical;
        else out.pass = false;
    }
    out.detail = std::to_string(identical) + "/" + std::to_string(cli::subcommands().size()) +
                 " subcommands byte-identical";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    bool enforce = false;
    std::string scratch_dir = (fs::temp_directory_path() / "rmrelax_acceptance").string();
    app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 10));
    app.add_flag("--enforce-runtime", enforce, "count runtime budget overruns as failures");
    app.add_option("--scratch", scratch_dir, "directory for CLI outputs");
    CLI11_PARSE(app, argc, argv);

    const fs::path scratch = scratch_dir;
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> all{
        {1, "self-averaging bound", 180, self_averaging},
        {2, "semicircle oracle", 60, semicircle_oracle},
        {3, "zero-coupling exactness", 30, zero_coupling},
        {4, "limit vs Monte Carlo", 600, [&] { return limit_vs_oracle(scratch); }},
        {5, "delta identity", 30, delta_identity},
        {6, "van Hove trace and initial condition", 30, vanhove_identities},
        {7, "van Hove vs full dynamics", 600, vanhove_consistency},
        {8, "density bound and mass", 60, density_bound},
        {9, "resolvent variance bound", 60, resolvent_variance},
        {10, "reproducibility", 600, [&] { return reproducibility(scratch); }},
    };

    int failures = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool over = secs > c.budget;
        const bool pass = v.pass && !(enforce && over);
        if (!pass) ++failures;
        std::printf("criterion %2d %s: %s (%s; %.1f s, budget %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                    v.detail.c_str(), secs, c.budget, over ? ", over budget" : "");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
