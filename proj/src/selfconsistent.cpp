#include "rmrelax/selfconsistent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rmrelax {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kContinuationFactor = 0.7;
constexpr double kTailFloor = 1e-6;

struct Evaluation {
    cplx g_plus, g_minus;  // right-hand sides
    double residual;
};

Evaluation evaluate(const ModelParams& p, cplx z, cplx fp, cplx fm) {
    const double v2 = p.v * p.v;
    const cplx gp = f0(p.measure, z - p.s + v2 * fm);
    const cplx gm = f0(p.measure, z + p.s + v2 * fp);
    return {gp, gm, std::max(std::abs(fp - gp), std::abs(fm - gm))};
}

bool herglotz(cplx fp, cplx fm) { return fp.imag() > 0.0 && fm.imag() > 0.0; }

// Trapezoid integral of a piecewise-linear table over [a, b] inside its grid.
double window_integral(const std::vector<double>& x, const std::vector<double>& y, double a, double b) {
    auto value_at = [&](double t) {
        auto it = std::upper_bound(x.begin(), x.end(), t);
        std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - x.begin()), 1, x.size() - 1);
        const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
        return (1.0 - w) * y[i - 1] + w * y[i];
    };
    double sum = 0.0;
    double left = a;
    double fl = value_at(a);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= a) continue;
        if (x[i] >= b) break;
        sum += 0.5 * (fl + y[i]) * (x[i] - left);
        left = x[i];
        fl = y[i];
    }
    sum += 0.5 * (fl + value_at(b)) * (b - left);
    return sum;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return sum;
}

}  // namespace

void ModelParams::validate() const {
    if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorKind::invalid_argument, "s must be finite and >= 0");
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorKind::invalid_argument, "v must be finite and >= 0");
}

StieltjesPair StieltjesPair::conj() const {
    return {std::conj(z), std::conj(f_plus), std::conj(f_minus), residual, iterations};
}

double pair_residual(const ModelParams& p, cplx z, cplx f_plus, cplx f_minus) {
    return evaluate(p, z, f_plus, f_minus).residual;
}

StieltjesPair solve_pair(const ModelParams& p, cplx z, const SolverOptions& opt,
                         const std::optional<StieltjesPair>& warm) {
    if (z.imag() == 0.0)
        fail(ErrorKind::real_axis_evaluation, "solve_pair needs Im z != 0");
    if (z.imag() < 0.0) {
        std::optional<StieltjesPair> w;
        if (warm) w = warm->conj();
        return solve_pair(p, std::conj(z), opt, w).conj();
    }
    const double v2 = p.v * p.v;

    cplx fp = f0(p.measure, z - p.s);
    cplx fm = f0(p.measure, z + p.s);
    if (warm && herglotz(warm->f_plus, warm->f_minus)) {
        const Evaluation a = evaluate(p, z, warm->f_plus, warm->f_minus);
        const Evaluation b = evaluate(p, z, fp, fm);
        if (a.residual < b.residual) {
            fp = warm->f_plus;
            fm = warm->f_minus;
        }
    }
    Evaluation cur = evaluate(p, z, fp, fm);
    double gamma = opt.damping;
    int it = 0;
    auto done = [&] { return cur.residual <= opt.tol * std::max({1.0, std::abs(fp), std::abs(fm)}); };

    while (!done()) {
        if (it >= opt.max_iterations) {
            std::ostringstream os;
            os << "self-consistent solve did not converge at z = " << z << " after " << it
               << " iterations (residual " << cur.residual << ")";
            fail(ErrorKind::no_convergence, os.str());
        }
        ++it;
        bool accepted = false;
        if (opt.newton) {
            const cplx dp = f0_derivative(p.measure, z - p.s + v2 * fm);
            const cplx dm = f0_derivative(p.measure, z + p.s + v2 * fp);
            // F_+ = f_+ - f0(w_+), w_+ depends on f_-; symmetric for F_-.
            const cplx Fp = fp - cur.g_plus;
            const cplx Fm = fm - cur.g_minus;
            const cplx a12 = -v2 * dp, a21 = -v2 * dm;
            const cplx det = 1.0 - a12 * a21;
            if (std::abs(det) > 1e-14) {
                const cplx np = fp - (Fp - a12 * Fm) / det;
                const cplx nm = fm - (Fm - a21 * Fp) / det;
                if (herglotz(np, nm)) {
                    const Evaluation next = evaluate(p, z, np, nm);
                    if (next.residual < cur.residual) {
                        fp = np;
                        fm = nm;
                        cur = next;
                        accepted = true;
                    }
                }
            }
        }
        if (accepted) continue;
        // Damped fixed point; the halving keeps the step inside the Herglotz class.
        for (;;) {
            const cplx np = (1.0 - gamma) * fp + gamma * cur.g_plus;
            const cplx nm = (1.0 - gamma) * fm + gamma * cur.g_minus;
            const Evaluation next = evaluate(p, z, np, nm);
            if (next.residual <= cur.residual || gamma < 1e-8) {
                fp = np;
                fm = nm;
                cur = next;
                break;
            }
            gamma *= 0.5;
        }
    }
    return {z, fp, fm, cur.residual, it};
}

std::vector<StieltjesPair> solve_on_grid(const ModelParams& p, std::span<const double> lambdas,
                                         double eta, const SolverOptions& opt) {
    if (!(eta > 0.0)) fail(ErrorKind::invalid_argument, "solve_on_grid: eta must be positive");
    const double eta0 = std::max(2.0 * p.v, 1.0);
    std::vector<StieltjesPair> out;
    out.reserve(lambdas.size());
    for (double lam : lambdas) {
        double level = std::max(eta0, eta);
        try {
            StieltjesPair pair = solve_pair(p, {lam, level}, opt);
            while (level > eta) {
                level = std::max(level * kContinuationFactor, eta);
                pair = solve_pair(p, {lam, level}, opt, pair);
            }
            out.push_back(pair);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::no_convergence) throw;
            std::ostringstream os;
            os << e.what() << " [lambda = " << lam << ", eta = " << level << "]";
            fail(ErrorKind::no_convergence, os.str());
        }
    }
    return out;
}

SpectralDensities invert_density(const ModelParams& p, std::span<const StieltjesPair> at_eta1,
                                 std::span<const StieltjesPair> at_eta2, double mass_tol) {
    if (at_eta1.size() != at_eta2.size() || at_eta1.size() < 2)
        fail(ErrorKind::invalid_argument, "invert_density: need two equally sized grids of >= 2 points");
    SpectralDensities d;
    d.eta1 = at_eta1.front().z.imag();
    d.extrapolated = p.measure.kind() != MeasureKind::atoms;
    const std::size_t n = at_eta1.size();
    d.lambda.resize(n);
    d.nu_plus.resize(n);
    d.nu_minus.resize(n);
    d.pairs.assign(at_eta1.begin(), at_eta1.end());
    for (std::size_t i = 0; i < n; ++i) {
        const StieltjesPair& a = at_eta1[i];
        const StieltjesPair& b = at_eta2[i];
        if (a.z.real() != b.z.real() || std::abs(b.z.imag() - 0.5 * a.z.imag()) > 1e-12 * a.z.imag())
            fail(ErrorKind::invalid_argument, "invert_density: grids must share lambda with eta2 = eta1 / 2");
        if (i > 0 && !(a.z.real() > d.lambda[i - 1]))
            fail(ErrorKind::non_monotone_grid, "invert_density: lambda grid must be increasing");
        d.lambda[i] = a.z.real();
        for (int alpha : {+1, -1}) {
            const double raw1 = a.f(alpha).imag() / kPi;
            const double raw2 = b.f(alpha).imag() / kPi;
            const double nu = d.extrapolated ? 2.0 * raw2 - raw1 : raw1;
            (alpha > 0 ? d.nu_plus : d.nu_minus)[i] = std::max(nu, 0.0);
        }
    }
    // Finite-eta smoothing leaves tails of order eta^2 outside the support.
    const double peak = std::max(*std::max_element(d.nu_plus.begin(), d.nu_plus.end()),
                                 *std::max_element(d.nu_minus.begin(), d.nu_minus.end()));
    const double floor = kTailFloor * peak;
    for (auto* nu : {&d.nu_plus, &d.nu_minus})
        for (double& x : *nu)
            if (x < floor) x = 0.0;
    d.mass_plus = trapezoid(d.lambda, d.nu_plus);
    d.mass_minus = trapezoid(d.lambda, d.nu_minus);
    // A purely atomic reservoir at v = 0 has no density to normalize.
    const bool atomic_limit = p.measure.kind() == MeasureKind::atoms && p.v == 0.0;
    if (!atomic_limit) {
        for (double mass : {d.mass_plus, d.mass_minus}) {
            if (std::abs(mass - 1.0) > mass_tol) {
                std::ostringstream os;
                os << "recovered spectral mass " << mass << " differs from 1 by more than " << mass_tol
                   << "; widen or refine the lambda grid";
                fail(ErrorKind::mass_deficit, os.str());
            }
        }
    }
    return d;
}

SpectralDensities spectral_densities(const ModelParams& p, std::span<const double> lambdas, double eta1,
                                     const SolverOptions& opt, double mass_tol) {
    p.validate();
    const auto a = solve_on_grid(p, lambdas, eta1, opt);
    const auto b = solve_on_grid(p, lambdas, 0.5 * eta1, opt);
    return invert_density(p, a, b, mass_tol);
}

std::vector<double> default_lambda_grid(const ModelParams& p, double spacing) {
    if (!(spacing > 0.0)) fail(ErrorKind::invalid_argument, "grid spacing must be positive");
    const auto [lo0, hi0] = p.measure.support();
    const double reach = p.s + 2.0 * p.v;
    const double margin = 0.05 * (hi0 - lo0 + 2.0 * reach) + 0.1;
    const double lo = lo0 - reach - margin;
    const double hi = hi0 + reach + margin;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / spacing));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / n;
    return grid;
}

double default_window(const ModelParams& p) {
    const auto [lo, hi] = p.measure.support();
    return 0.05 * std::max(hi - lo, 1e-3);
}

EquilibriumState equilibrium_micro(const ModelParams& p, double lambda, double epsilon,
                                   const SpectralDensities& d) {
    (void)p;
    if (!(epsilon > 0.0)) fail(ErrorKind::invalid_argument, "window half-width must be positive");
    if (lambda - epsilon < d.lambda.front() || lambda + epsilon > d.lambda.back())
        fail(ErrorKind::window_out_of_range, "microcanonical window extends beyond the density grid");
    const double plus = window_integral(d.lambda, d.nu_plus, lambda - epsilon, lambda + epsilon) / (2 * epsilon);
    const double minus = window_integral(d.lambda, d.nu_minus, lambda - epsilon, lambda + epsilon) / (2 * epsilon);
    if (plus < 1e-14 && minus < 1e-14) {
        std::ostringstream os;
        os << "no spectral weight in [" << lambda - epsilon << ", " << lambda + epsilon << "]";
        fail(ErrorKind::empty_window, os.str());
    }
    const double total = plus + minus;
    return {lambda, epsilon, TwoLevelState::diagonal(plus / total, minus / total)};
}

TwoLevelState equilibrium_canonical(const ModelParams& p, double beta, const SpectralDensities& d) {
    (void)p;
    if (!std::isfinite(beta)) fail(ErrorKind::invalid_argument, "beta must be finite");
    double shift = -HUGE_VAL;
    for (std::size_t i = 0; i < d.lambda.size(); ++i)
        if (d.nu_plus[i] > 0.0 || d.nu_minus[i] > 0.0) shift = std::max(shift, -beta * d.lambda[i]);
    if (!std::isfinite(shift)) fail(ErrorKind::empty_window, "densities vanish on the whole grid");
    std::vector<double> wp(d.lambda.size()), wm(d.lambda.size());
    for (std::size_t i = 0; i < d.lambda.size(); ++i) {
        const double b = std::exp(-beta * d.lambda[i] - shift);
        wp[i] = b * d.nu_plus[i];
        wm[i] = b * d.nu_minus[i];
    }
    const double mp = trapezoid(d.lambda, wp);
    const double mm = trapezoid(d.lambda, wm);
    const double total = mp + mm;
    if (!std::isfinite(total) || !(total > 0.0)) {
        std::ostringstream os;
        os << "Boltzmann weights at beta = " << beta << " over/underflow on the density grid";
        fail(ErrorKind::tail_overflow, os.str());
    }
    return TwoLevelState::diagonal(mp / total, mm / total);
}

}  // namespace rmrelax
