#include "rmrelax/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rmrelax/finite_n.hpp"
#include "rmrelax/output.hpp"
#include "rmrelax/vanhove.hpp"

namespace rmrelax::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
    fail(ErrorKind::validation_error, key + ": " + why);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) invalid(where.empty() ? "config" : where, "expected an object");
    for (const auto& [key, _] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) invalid(where.empty() ? key : where + "." + key, "unknown key");
    }
}

double number(const json& j, const std::string& key, double fallback, bool required = false) {
    const auto dot = key.rfind('.');
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    if (!j.contains(leaf)) {
        if (required) invalid(key, "required");
        return fallback;
    }
    const json& x = j.at(leaf);
    if (!x.is_number()) invalid(key, "expected a number");
    const double d = x.get<double>();
    if (!std::isfinite(d)) invalid(key, "must be finite");
    return d;
}

std::uint64_t count(const json& j, const std::string& key, std::uint64_t fallback) {
    const auto dot = key.rfind('.');
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    if (!j.contains(leaf)) return fallback;
    const json& x = j.at(leaf);
    if (x.is_number_unsigned()) return x.get<std::uint64_t>();
    if (x.is_number_integer() && x.get<std::int64_t>() >= 0) return x.get<std::uint64_t>();
    invalid(key, "expected a non-negative integer");
}

Grid grid(const json& parent, const std::string& key, Grid fallback, bool allow_empty = false) {
    if (!parent.contains(key)) return fallback;
    const json& j = parent.at(key);
    check_keys(j, key, {"start", "stop", "points"});
    Grid g;
    g.start = number(j, key + ".start", fallback.start);
    g.stop = number(j, key + ".stop", fallback.stop);
    g.points = static_cast<int>(count(j, key + ".points", fallback.points));
    if (g.points < 1 && !(allow_empty && g.points == 0)) invalid(key + ".points", "must be >= 1");
    if (g.points > 1 && !(g.stop > g.start))
        invalid(key, "stop must exceed start for an increasing grid");
    return g;
}

json grid_json(const Grid& g) { return {{"start", g.start}, {"stop", g.stop}, {"points", g.points}}; }

Eigen::Matrix2cd parse_rho(const json& j) {
    check_keys(j, "rho0", {"re", "im"});
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    for (const char* part : {"re", "im"}) {
        if (!j.contains(part)) {
            if (std::string(part) == "re") invalid("rho0.re", "required");
            continue;
        }
        const json& q = j.at(part);
        if (!q.is_array() || q.size() != 4) invalid(std::string("rho0.") + part, "expected 4 numbers (row-major)");
        for (int i = 0; i < 4; ++i) {
            if (!q[i].is_number()) invalid(std::string("rho0.") + part, "expected numbers");
            const double x = q[i].get<double>();
            if (std::string(part) == "re")
                m(i / 2, i % 2).real(x);
            else
                m(i / 2, i % 2).imag(x);
        }
    }
    return m;
}

}  // namespace

std::vector<double> Grid::values() const {
    std::vector<double> out;
    for (int i = 0; i < points; ++i)
        out.push_back(points == 1 ? start : start + (stop - start) * i / (points - 1));
    return out;
}

ModelParams ExperimentConfig::model() const { return {s, v, make_measure(measure)}; }

TwoLevelState ExperimentConfig::initial_state() const { return TwoLevelState::validated(rho0); }

ContourSpec ExperimentConfig::contour_spec() const {
    ContourSpec c;
    c.eta1 = contour.eta1;
    c.eta2 = contour.eta2;
    c.X = contour.X;
    c.tol = contour.tol;
    return c;
}

ExperimentConfig parse_config(const json& j) {
    check_keys(j, "", {"measure", "s", "v", "E", "rho0", "n", "samples", "seed", "time", "tau",
                       "contour", "output", "options"});
    ExperimentConfig c;
    if (!j.contains("measure")) invalid("measure", "required");
    c.measure = j.at("measure");
    try {
        make_measure(c.measure);
    } catch (const Error& e) {
        invalid("measure", e.what());
    } catch (const json::exception& e) {
        invalid("measure", e.what());
    }
    c.s = number(j, "s", 0, true);
    c.v = number(j, "v", 0, true);
    c.E = number(j, "E", 0);
    if (c.v < 0) invalid("v", "must be >= 0");
    if (j.contains("rho0")) c.rho0 = parse_rho(j.at("rho0"));
    try {
        TwoLevelState::validated(c.rho0);
    } catch (const Error& e) {
        invalid("rho0", e.what());
    }
    c.n = count(j, "n", c.n);
    c.samples = count(j, "samples", c.samples);
    c.seed = count(j, "seed", c.seed);
    if (c.n < 1) invalid("n", "must be >= 1");
    if (c.samples < 1) invalid("samples", "must be >= 1");
    c.time = grid(j, "time", c.time);
    c.tau = grid(j, "tau", c.tau);
    if (c.time.start < 0) invalid("time.start", "must be >= 0");
    if (c.tau.start < 0) invalid("tau.start", "must be >= 0");
    if (j.contains("contour")) {
        const json& k = j.at("contour");
        check_keys(k, "contour", {"eta1", "eta2", "X", "tol"});
        c.contour.eta1 = number(k, "contour.eta1", 0);
        c.contour.eta2 = number(k, "contour.eta2", 0);
        c.contour.X = number(k, "contour.X", 0);
        c.contour.tol = number(k, "contour.tol", c.contour.tol);
        try {
            c.contour_spec().validate();
        } catch (const Error& e) {
            invalid("contour", e.what());
        }
    }
    if (j.contains("output")) {
        if (!j.at("output").is_string()) invalid("output", "expected a string");
        c.output = j.at("output").get<std::string>();
    }
    if (j.contains("options")) {
        const json& o = j.at("options");
        check_keys(o, "options", {"beta", "epsilon", "bins", "spacing", "eta", "threshold", "lambda"});
        c.options.beta = number(o, "options.beta", c.options.beta);
        c.options.epsilon = number(o, "options.epsilon", c.options.epsilon);
        c.options.bins = static_cast<int>(count(o, "options.bins", c.options.bins));
        c.options.spacing = number(o, "options.spacing", c.options.spacing);
        c.options.eta = number(o, "options.eta", c.options.eta);
        c.options.threshold = number(o, "options.threshold", c.options.threshold);
        c.options.lambda = grid(o, "lambda", c.options.lambda, true);
        if (c.options.epsilon < 0) invalid("options.epsilon", "must be >= 0");
        if (!(c.options.spacing > 0)) invalid("options.spacing", "must be > 0");
        if (!(c.options.eta > 0)) invalid("options.eta", "must be > 0");
        if (!(c.options.threshold > 0)) invalid("options.threshold", "must be > 0");
    }
    return c;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io_error, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::parse_error, path.string() + ": " + e.what());
    }
}

ExperimentConfig load_config(const fs::path& path) { return parse_config(read_json(path)); }

json to_json(const ExperimentConfig& c) {
    json rho = {{"re", json::array()}, {"im", json::array()}};
    for (int i = 0; i < 4; ++i) {
        rho["re"].push_back(c.rho0(i / 2, i % 2).real());
        rho["im"].push_back(c.rho0(i / 2, i % 2).imag());
    }
    return {{"measure", c.measure},
            {"s", c.s},
            {"v", c.v},
            {"E", c.E},
            {"rho0", rho},
            {"n", c.n},
            {"samples", c.samples},
            {"seed", c.seed},
            {"time", grid_json(c.time)},
            {"tau", grid_json(c.tau)},
            {"contour",
             {{"eta1", c.contour.eta1}, {"eta2", c.contour.eta2}, {"X", c.contour.X}, {"tol", c.contour.tol}}},
            {"output", c.output},
            {"options",
             {{"beta", c.options.beta},
              {"epsilon", c.options.epsilon},
              {"bins", c.options.bins},
              {"spacing", c.options.spacing},
              {"eta", c.options.eta},
              {"threshold", c.options.threshold},
              {"lambda", grid_json(c.options.lambda)}}}};
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        fail(ErrorKind::parse_error, "override '" + assignment + "' is not key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json* node = &doc;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) fail(ErrorKind::parse_error, "empty path segment in '" + path + "'");
        parts.push_back(part);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        json& next = (*node)[parts[i]];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) fail(ErrorKind::validation_error, path + ": '" + parts[i] + "' is not an object");
        node = &next;
    }
    (*node)[parts.back()] = value;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation_error:
        case ErrorKind::parse_error:
        case ErrorKind::invalid_argument:
        case ErrorKind::non_normalizable:
        case ErrorKind::non_monotone_grid:
        case ErrorKind::negative_density: return 2;
        case ErrorKind::no_convergence: return 3;
        case ErrorKind::mass_deficit: return 5;
        case ErrorKind::quadrature_budget_exceeded: return 6;
        case ErrorKind::denominator_near_zero: return 7;
        case ErrorKind::eigendecomposition_failure: return 8;
        case ErrorKind::spectrum_out_of_range: return 9;
        case ErrorKind::zero_rate: return 10;
        case ErrorKind::empty_window: return 11;
        case ErrorKind::window_out_of_range: return 12;
        case ErrorKind::tail_overflow: return 13;
        case ErrorKind::atomic_measure: return 14;
        case ErrorKind::real_axis_evaluation: return 15;
        case ErrorKind::divergent_tail: return 16;
        case ErrorKind::missing_column: return 17;
        case ErrorKind::io_error: return 18;
    }
    return 1;
}

namespace {

struct Output {
    json diagnostics = json::object();
    std::vector<std::pair<std::string, io::PlotSpec>> plots;  // csv name -> plot
    int exit_code = 0;
};

void write(const fs::path& dir, const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    io::write_csv(dir / name, header, rows);
}

double max_residual(const std::vector<StieltjesPair>& pairs) {
    double r = 0;
    for (const auto& p : pairs) r = std::max(r, p.residual);
    return r;
}

Output run_spectrum(const ExperimentConfig& c, const fs::path& dir) {
    const ModelParams p = c.model();
    const auto lambdas = default_lambda_grid(p, c.options.spacing);
    const SpectralDensities d = spectral_densities(p, lambdas, c.options.eta);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lambdas.size(); ++i) rows.push_back({lambdas[i], d.nu_plus[i], d.nu_minus[i]});
    write(dir, "spectrum.csv", {"lambda", "nu_plus", "nu_minus"}, rows);
    Output out;
    out.diagnostics = {{"points", lambdas.size()},
                       {"eta1", d.eta1},
                       {"extrapolated", d.extrapolated},
                       {"mass_plus", d.mass_plus},
                       {"mass_minus", d.mass_minus},
                       {"max_nu_plus", *std::max_element(d.nu_plus.begin(), d.nu_plus.end())},
                       {"max_nu_minus", *std::max_element(d.nu_minus.begin(), d.nu_minus.end())},
                       {"max_residual", max_residual(d.pairs)}};
    out.plots.push_back({"spectrum.csv", {"lambda", {"nu_plus", "nu_minus"}, "spectral densities", "density"}});

    if (c.options.bins > 0) {
        const FiniteModel fm = FiniteModel::build(p, c.n, c.E, c.seed);
        std::mt19937_64 rng(sample_seed(c.seed, 0));
        const auto w = sample_gue(c.n, rng);
        const SampleEvolution ev(assemble_h(fm, w));
        const double lo = std::min(lambdas.front(), ev.eigenvalues().minCoeff());
        const double hi = std::max(lambdas.back(), ev.eigenvalues().maxCoeff());
        const double width = (hi - lo) / c.options.bins;
        std::vector<double> edges;
        for (int b = 0; b <= c.options.bins; ++b) edges.push_back(lo + width * b);
        edges.back() = std::nextafter(hi, HUGE_VAL);
        const MatrixHistogram h = empirical_measure(ev, edges);
        std::vector<std::vector<double>> hrows;
        for (int b = 0; b < c.options.bins; ++b)
            hrows.push_back({0.5 * (edges[b] + edges[b + 1]), h(1, 1)[b].real() / width,
                             h(-1, -1)[b].real() / width});
        write(dir, "empirical.csv", {"lambda", "empirical_plus", "empirical_minus"}, hrows);
        out.diagnostics["empirical"] = {{"n", c.n}, {"bins", c.options.bins}, {"seed", sample_seed(c.seed, 0)}};
        out.plots.push_back({"empirical.csv",
                             {"lambda", {"empirical_plus", "empirical_minus"}, "finite-n spectral measure", "density"}});
    }
    return out;
}

std::vector<double> state_row(double t, const TwoLevelState& r) {
    return {t, r(1, 1).real(), r(-1, -1).real(), r(1, -1).real(), r(1, -1).imag(), std::abs(r(1, -1))};
}

Output run_evolve(const ExperimentConfig& c, const fs::path& dir) {
    const auto times = c.time.values();
    const Trajectory traj = evolve(c.model(), c.E, times, c.initial_state(), c.contour_spec());
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < times.size(); ++i) rows.push_back(state_row(times[i], traj.states[i]));
    write(dir, "evolve.csv", {"t", "rho_pp", "rho_mm", "rho_pm_re", "rho_pm_im", "offdiag_modulus"}, rows);
    Output out;
    out.diagnostics = traj.meta;
    double worst = 0;
    for (const auto& q : traj.meta["quadrature"]) worst = std::max(worst, q["truncation_change"].get<double>());
    out.diagnostics["max_truncation_change"] = worst;
    out.plots.push_back({"evolve.csv", {"t", {"rho_pp", "rho_mm", "offdiag_modulus"}, "reduced density matrix", "entry"}});
    return out;
}

Output run_vanhove(const ExperimentConfig& c, const fs::path& dir) {
    VanHoveParams p;
    p.E = c.E;
    p.s = c.s;
    p.measure = make_measure(c.measure);
    p.taus = c.tau.values();
    p.display_v = c.v;
    const VanHoveResult r = van_hove(p, c.initial_state());
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.taus.size(); ++i)
        rows.push_back({r.taus[i], r.diagonal[i](0), r.diagonal[i](1), r.offdiag[i].modulus,
                        r.offdiag[i].slow_phase, r.gamma.plus, r.gamma.minus, r.stationary(0),
                        r.stationary(1)});
    write(dir, "vanhove.csv",
          {"tau", "rho_pp", "rho_mm", "offdiag_modulus", "offdiag_slow_phase", "gamma_plus", "gamma_minus",
           "stationary_pp", "stationary_mm"},
          rows);
    Output out;
    out.diagnostics = {{"gamma_plus", r.gamma.plus},
                       {"gamma_minus", r.gamma.minus},
                       {"zero_rate_plus", r.gamma.zero_plus},
                       {"zero_rate_minus", r.gamma.zero_minus},
                       {"stationary", {r.stationary(0), r.stationary(1)}},
                       {"fast_phase_time", c.v > 0 ? "tau / v^2" : "dropped (v = 0)"}};
    out.plots.push_back({"vanhove.csv",
                         {"tau", {"rho_pp", "rho_mm", "stationary_pp", "stationary_mm"}, "weak-coupling relaxation",
                          "population"}});
    return out;
}

EnsembleStats monte_carlo(const ExperimentConfig& c, std::span<const double> times) {
    const FiniteModel fm = FiniteModel::build(c.model(), c.n, c.E, c.seed);
    return ensemble_run(fm, c.initial_state(), times, c.samples);
}

Output run_montecarlo(const ExperimentConfig& c, const fs::path& dir) {
    if (c.samples < 2) invalid("samples", "montecarlo needs at least 2 samples for a variance");
    const auto times = c.time.values();
    const EnsembleStats st = monte_carlo(c, times);
    std::vector<std::vector<double>> rows;
    double ratio = 0, margin = HUGE_VAL;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& m = st.mean[i];
        const auto& var = st.variance[i];
        const double t = times[i];
        const double bound = 8 * c.v * c.v * t * t / double(c.n);
        rows.push_back({t, m(1, 1).real(), m(-1, -1).real(), m(1, -1).real(), m(1, -1).imag(), var(0, 0),
                        var(1, 1), var(0, 1), var(1, 0), bound});
        if (t > 0) {
            ratio = std::max(ratio, var.maxCoeff() / bound);
            margin = std::min(margin, bound - var.maxCoeff());
        }
    }
    write(dir, "montecarlo.csv",
          {"t", "mean_pp", "mean_mm", "mean_pm_re", "mean_pm_im", "var_pp", "var_mm", "var_pm", "var_mp", "bound"},
          rows);
    Output out;
    out.diagnostics = {{"n", c.n},
                       {"samples", st.samples},
                       {"seed", c.seed},
                       {"initial_index", FiniteModel::build(c.model(), c.n, c.E, c.seed).k},
                       {"max_variance_over_bound", ratio},
                       {"min_bound_margin", std::isfinite(margin) ? json(margin) : json(nullptr)}};
    out.plots.push_back({"montecarlo.csv", {"t", {"var_pp", "var_mm", "var_pm", "bound"}, "ensemble variance", "variance"}});
    return out;
}

Output run_compare(const ExperimentConfig& c, const fs::path& dir) {
    const auto times = c.time.values();
    const Trajectory lim = evolve(c.model(), c.E, times, c.initial_state(), c.contour_spec());
    const EnsembleStats mc = monte_carlo(c, times);
    std::vector<std::vector<double>> rows;
    double worst = 0;
    json per_time = json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& a = lim.states[i];
        const auto& b = mc.mean[i];
        const double dpp = std::abs(a(1, 1) - b(1, 1));
        const double dmm = std::abs(a(-1, -1) - b(-1, -1));
        const double dpm = std::abs(a(1, -1) - b(1, -1));
        const double dmax = std::max({dpp, dmm, dpm, std::abs(a(-1, 1) - b(-1, 1))});
        worst = std::max(worst, dmax);
        rows.push_back({times[i], a(1, 1).real(), a(-1, -1).real(), a(1, -1).real(), a(1, -1).imag(),
                        b(1, 1).real(), b(-1, -1).real(), b(1, -1).real(), b(1, -1).imag(), dpp, dmm, dpm, dmax});
        per_time.push_back({{"t", times[i]}, {"max_deviation", dmax}});
    }
    write(dir, "compare.csv",
          {"t", "limit_pp", "limit_mm", "limit_pm_re", "limit_pm_im", "mc_pp", "mc_mm", "mc_pm_re", "mc_pm_im",
           "dev_pp", "dev_mm", "dev_pm", "dev_max"},
          rows);
    Output out;
    out.diagnostics = {{"n", c.n},
                       {"samples", mc.samples},
                       {"max_deviation", worst},
                       {"threshold", c.options.threshold},
                       {"passed", worst <= c.options.threshold},
                       {"per_time", per_time},
                       {"limit", lim.meta}};
    out.exit_code = worst <= c.options.threshold ? 0 : 4;
    out.plots.push_back({"compare.csv", {"t", {"dev_pp", "dev_mm", "dev_pm"}, "limit vs Monte Carlo", "deviation"}});
    return out;
}

Output run_equilibrium(const ExperimentConfig& c, const fs::path& dir) {
    const ModelParams p = c.model();
    const SpectralDensities d = spectral_densities(p, default_lambda_grid(p, c.options.spacing), c.options.eta);
    const double eps = c.options.epsilon > 0 ? c.options.epsilon : default_window(p);
    Grid centres = c.options.lambda;
    if (centres.points == 0) {
        const auto [lo, hi] = p.measure.support();
        centres = {lo + eps, hi - eps, 21};
        if (!(centres.stop > centres.start)) centres = {0.5 * (lo + hi), 0.5 * (lo + hi), 1};
    }
    std::vector<std::vector<double>> rows;
    for (double lam : centres.values()) {
        const EquilibriumState e = equilibrium_micro(p, lam, eps, d);
        rows.push_back({lam, e.omega(1, 1).real(), e.omega(-1, -1).real()});
    }
    write(dir, "equilibrium.csv", {"lambda", "micro_pp", "micro_mm"}, rows);
    const TwoLevelState can = equilibrium_canonical(p, c.options.beta, d);
    write(dir, "canonical.csv", {"beta", "canonical_pp", "canonical_mm"},
          {{c.options.beta, can(1, 1).real(), can(-1, -1).real()}});
    Output out;
    out.diagnostics = {{"epsilon", eps},
                       {"beta", c.options.beta},
                       {"canonical", {can(1, 1).real(), can(-1, -1).real()}},
                       {"mass_plus", d.mass_plus},
                       {"mass_minus", d.mass_minus},
                       {"max_residual", max_residual(d.pairs)}};
    out.plots.push_back({"equilibrium.csv", {"lambda", {"micro_pp", "micro_mm"}, "microcanonical state", "population"}});
    return out;
}

}  // namespace

RunResult run(const std::string& subcommand, const ExperimentConfig& config, bool plot) {
    const auto started = std::chrono::steady_clock::now();
    const fs::path dir = config.output;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io_error, "cannot create " + dir.string() + ": " + ec.message());

    Output out;
    if (subcommand == "spectrum") out = run_spectrum(config, dir);
    else if (subcommand == "evolve") out = run_evolve(config, dir);
    else if (subcommand == "vanhove") out = run_vanhove(config, dir);
    else if (subcommand == "montecarlo") out = run_montecarlo(config, dir);
    else if (subcommand == "compare") out = run_compare(config, dir);
    else if (subcommand == "equilibrium") out = run_equilibrium(config, dir);
    else fail(ErrorKind::validation_error, "unknown subcommand '" + subcommand + "'");

    if (plot)
        for (const auto& [csv, spec] : out.plots)
            io::emit_plot(dir / csv, spec, dir / (fs::path(csv).stem().string() + ".svg"));

    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
            names.insert(entry.path().filename().string());
    json files = json::array();
    for (const auto& name : names)
        files.push_back({{"name", name},
                         {"bytes", fs::file_size(dir / name)},
                         {"sha256", io::sha256_file(dir / name)}});

    RunResult result;
    result.exit_code = out.exit_code;
    result.manifest = {{"artifact", "rmrelax"},
                       {"version", kVersion},
                       {"subcommand", subcommand},
                       {"config", to_json(config)},
                       {"files", files},
                       {"diagnostics", out.diagnostics},
                       {"exit_code", out.exit_code},
                       {"wall_clock_seconds",
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
    std::ofstream mf(dir / "manifest.json");
    mf << result.manifest.dump(2) << '\n';
    if (!mf) fail(ErrorKind::io_error, "cannot write the manifest");
    return result;
}

}  // namespace rmrelax::cli
