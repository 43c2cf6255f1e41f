#include "rmrelax/vanhove.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rmrelax {

using std::numbers::pi;

void VanHoveParams::validate() const {
    if (!measure.has_density())
        fail(ErrorKind::atomic_measure, "the van Hove limit needs a measure with a density");
    if (!std::isfinite(E) || !std::isfinite(s))
        fail(ErrorKind::validation_error, "E and s must be finite");
    if (!(display_v >= 0.0)) fail(ErrorKind::validation_error, "display_v must be >= 0");
    for (double tau : taus)
        if (!(tau >= 0.0) || !std::isfinite(tau))
            fail(ErrorKind::validation_error, "tau must be finite and >= 0");
}

Rates rates(const VanHoveParams& p) {
    p.validate();
    const double at_e = p.measure.density(p.E);
    Rates r;
    r.plus = 2 * pi * (at_e + p.measure.density(p.E + 2 * p.s));
    r.minus = 2 * pi * (at_e + p.measure.density(p.E - 2 * p.s));
    r.zero_plus = r.plus == 0.0;
    r.zero_minus = r.minus == 0.0;
    return r;
}

double gamma(const VanHoveParams& p, int alpha) { return rates(p)(alpha); }

namespace {

// Fraction of level a's initial population transferred to -a by time tau:
// 2 pi nu0'(E + 2 a s) (1 - e^{-tau Gamma_a}) / Gamma_a, zero when Gamma_a = 0.
double transfer(const VanHoveParams& p, const Rates& r, int alpha, double tau) {
    if (r.zero(alpha)) return 0.0;
    const double g = r(alpha);
    const double out = p.measure.density(p.E + 2 * alpha * p.s);
    if (out == 0.0) return 0.0;
    if (std::isinf(tau)) return 2 * pi * out / g;
    return -2 * pi * out * std::expm1(-tau * g) / g;
}

}  // namespace

Eigen::Vector2d rho_diag_vh(const VanHoveParams& p, double tau, const TwoLevelState& rho0) {
    if (!(tau >= 0.0)) fail(ErrorKind::validation_error, "tau must be >= 0");
    const Rates r = rates(p);
    const double pp = rho0(1, 1).real();
    const double mm = rho0(-1, -1).real();
    const double kp = transfer(p, r, 1, tau);
    const double km = transfer(p, r, -1, tau);
    return {(1 - kp) * pp + km * mm, (1 - km) * mm + kp * pp};
}

OffDiagonal rho_offdiag_vh(const VanHoveParams& p, double t, double tau, const TwoLevelState& rho0,
                           int alpha) {
    p.validate();
    const double up = p.E + 2 * alpha * p.s;
    const double down = p.E - 2 * alpha * p.s;
    const BoundaryValue a = f0_boundary(p.measure, up, Side::above);
    const BoundaryValue b = f0_boundary(p.measure, down, Side::below);
    const cplx c0 = rho0(alpha, -alpha);
    OffDiagonal out;
    out.slow_phase = tau * (a.real - b.real);
    out.fast_phase = -2.0 * alpha * p.s * t;
    out.modulus = std::abs(c0) * std::exp(-tau * (a.imag - b.imag));
    out.value = c0 * std::exp(cplx(-tau * (a.imag - b.imag), out.slow_phase + out.fast_phase));
    return out;
}

Eigen::Vector2d stationary(const VanHoveParams& p, const TwoLevelState& rho0) {
    const Rates r = rates(p);
    if (r.zero_plus && r.zero_minus) {
        std::ostringstream os;
        os << "both relaxation rates vanish at E = " << p.E << ", s = " << p.s;
        fail(ErrorKind::zero_rate, os.str());
    }
    return rho_diag_vh(p, HUGE_VAL, rho0);
}

VanHoveResult van_hove(const VanHoveParams& p, const TwoLevelState& rho0) {
    VanHoveResult out;
    out.gamma = rates(p);
    out.stationary = stationary(p, rho0);
    out.taus = p.taus;
    for (double tau : p.taus) {
        out.diagonal.push_back(rho_diag_vh(p, tau, rho0));
        const double t = p.display_v > 0 ? tau / (p.display_v * p.display_v) : 0.0;
        out.offdiag.push_back(rho_offdiag_vh(p, t, tau, rho0, 1));
    }
    return out;
}

TwoLevelState time_window_average(const Trajectory& traj, double t, double dt) {
    const auto& ts = traj.times;
    if (!(dt > 0)) fail(ErrorKind::validation_error, "window half-width must be > 0");
    if (ts.size() < 2 || ts.size() != traj.states.size())
        fail(ErrorKind::validation_error, "trajectory needs at least two consistent samples");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) fail(ErrorKind::non_monotone_grid, "trajectory times must increase");
    const double lo = t - dt;
    const double hi = t + dt;
    if (lo < ts.front() || hi > ts.back()) {
        std::ostringstream os;
        os << "window [" << lo << ", " << hi << "] leaves the trajectory range [" << ts.front()
           << ", " << ts.back() << "]";
        fail(ErrorKind::window_out_of_range, os.str());
    }
    auto at = [&](double x) -> Eigen::Matrix2cd {
        auto it = std::upper_bound(ts.begin(), ts.end(), x);
        const std::size_t i = it == ts.end() ? ts.size() - 1 : std::size_t(it - ts.begin());
        const double w = (x - ts[i - 1]) / (ts[i] - ts[i - 1]);
        return (1 - w) * traj.states[i - 1].matrix() + w * traj.states[i].matrix();
    };
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    double prev_x = lo;
    Eigen::Matrix2cd prev = at(lo);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] <= lo) continue;
        if (ts[i] >= hi) break;
        sum += 0.5 * (ts[i] - prev_x) * (prev + traj.states[i].matrix());
        prev_x = ts[i];
        prev = traj.states[i].matrix();
    }
    sum += 0.5 * (hi - prev_x) * (prev + at(hi));
    return TwoLevelState(sum / (2 * dt));
}

}  // namespace rmrelax
