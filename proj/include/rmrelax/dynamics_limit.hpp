#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "rmrelax/selfconsistent.hpp"
#include "rmrelax/state.hpp"

namespace rmrelax {

/// Horizontal integration lines L1 = R + i eta1 and L2 = R - i eta2.
/// Zero means "choose automatically".
struct ContourSpec {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double X = 0.0;        // starting truncation half-width
    int panels = 0;        // minimum panel count across the spectral band
    double tol = 1e-6;     // target change between truncations X and 2X
    int max_doublings = 5;
    int order = 12;        // Gauss-Legendre points per panel

    void validate() const;
};

/// Default contour offset: min(0.5, 1 / (1 + t)).
double default_eta(double t);

/// diag(f_+(E, z), f_-(E, z)) with f_a(E, z) = 1 / (E + a s - z - v^2 f_{-a}(z)).
Eigen::Matrix2cd f_E(const ModelParams& p, double E, cplx z, const StieltjesPair& pair);

/// f_{beta gamma}(z1, z2) = int nu0(dE) f_beta(E, z1) f_gamma(E, z2) by quadrature over nu0.
cplx two_point(const ModelParams& p, int beta, int gamma, const StieltjesPair& at_z1,
               const StieltjesPair& at_z2);

/// Same quantity from the partial-fraction form
///   (f_beta(z1) - f_gamma(z2)) / (a - b),  a = z1 - beta s + v^2 f_{-beta}(z1),
///   b = z2 - gamma s + v^2 f_{-gamma}(z2).
cplx two_point_resolved(const ModelParams& p, int beta, int gamma, const StieltjesPair& at_z1,
                        const StieltjesPair& at_z2);

/// U_E(t) = (i / 2 pi) int_L e^{izt} f(E, z) dz on L = R - i eta2; diagonal.
Eigen::Matrix2cd u_E(const ModelParams& p, double E, double t, const ContourSpec& c = {});

/// u(t) = (i / 2 pi) int_L e^{izt} diag(f_+(z), f_-(z)) dz; diagonal.
Eigen::Matrix2cd u_mean(const ModelParams& p, double t, const ContourSpec& c = {});

struct RhoDiagnostics {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double X = 0.0;                 // accepted truncation (the outer one of the last pair)
    double truncation_change = 0.0; // max entry change between X / 2 and X
    double min_denominator = 0.0;   // min |1 - v^4 f f| over the node pairs
    std::size_t nodes = 0;          // nodes per line
    int doublings = 0;
    bool outside_support = false;   // E outside supp nu0
};

struct RhoResult {
    TwoLevelState state;
    RhoDiagnostics diagnostics;
};

/// The limiting reduced density matrix at reservoir energy E and time t >= 0.
RhoResult rho_limit_detailed(const ModelParams& p, double E, double t, const TwoLevelState& rho0,
                             const ContourSpec& c = {});

inline TwoLevelState rho_limit(const ModelParams& p, double E, double t, const TwoLevelState& rho0,
                               const ContourSpec& c = {}) {
    return rho_limit_detailed(p, E, t, rho0, c).state;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<TwoLevelState> states;
    std::vector<Eigen::Matrix2d> variance;  // optional, across samples
    nlohmann::json meta;
};

Trajectory evolve(const ModelParams& p, double E, std::span<const double> times,
                  const TwoLevelState& rho0, const ContourSpec& c = {});

}  // namespace rmrelax
