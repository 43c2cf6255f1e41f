#pragma once

#include <vector>

#include "rmrelax/dynamics_limit.hpp"
#include "rmrelax/measures.hpp"
#include "rmrelax/state.hpp"

namespace rmrelax {

/// Weak-coupling limit v -> 0, t -> infinity with tau = t v^2 fixed.
struct VanHoveParams {
    double E = 0.0;
    double s = 0.0;
    SpectralMeasure measure = SpectralMeasure::uniform(-1.0, 1.0);
    std::vector<double> taus;
    // Coupling used to recover the display time t = tau / v^2 for the fast
    // off-diagonal phase; zero drops the fast phase.
    double display_v = 0.0;

    void validate() const;
};

struct Rates {
    double plus = 0.0;
    double minus = 0.0;
    bool zero_plus = false;
    bool zero_minus = false;

    double operator()(int alpha) const { return alpha > 0 ? plus : minus; }
    bool zero(int alpha) const { return alpha > 0 ? zero_plus : zero_minus; }
};

/// Gamma_a = 2 pi [nu0'(E) + nu0'(E + 2 a s)].
Rates rates(const VanHoveParams& p);
double gamma(const VanHoveParams& p, int alpha);

/// (rho_++, rho_--) at rescaled time tau. A zero rate freezes that level's
/// outflow instead of dividing by zero.
Eigen::Vector2d rho_diag_vh(const VanHoveParams& p, double tau, const TwoLevelState& rho0);

struct OffDiagonal {
    cplx value;
    double modulus = 0.0;
    double slow_phase = 0.0;  // tau [Re f0(E + 2 a s) - Re f0(E - 2 a s)]
    double fast_phase = 0.0;  // -2 a s t
};

/// rho_{a,-a}(0) e^{-2 a s i t} e^{i tau (f0(E + 2 a s + i0) - f0(E - 2 a s - i0))}.
OffDiagonal rho_offdiag_vh(const VanHoveParams& p, double t, double tau, const TwoLevelState& rho0,
                           int alpha = 1);

/// tau -> infinity limit of rho_diag_vh. Throws zero_rate when both rates vanish.
Eigen::Vector2d stationary(const VanHoveParams& p, const TwoLevelState& rho0);

struct VanHoveResult {
    Rates gamma;
    Eigen::Vector2d stationary;
    std::vector<double> taus;
    std::vector<Eigen::Vector2d> diagonal;
    std::vector<OffDiagonal> offdiag;  // the (+, -) entry
};

VanHoveResult van_hove(const VanHoveParams& p, const TwoLevelState& rho0);

/// (2 dt)^{-1} int_{t - dt}^{t + dt} rho(t') dt' by the trapezoid rule on the
/// trajectory nodes, with linear interpolation at the window ends.
TwoLevelState time_window_average(const Trajectory& traj, double t, double dt);

}  // namespace rmrelax
