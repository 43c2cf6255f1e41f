#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rmrelax/measures.hpp"
#include "rmrelax/state.hpp"

namespace rmrelax {

struct ModelParams {
    double s = 0.0;  // level half-spacing
    double v = 0.0;  // coupling
    SpectralMeasure measure = SpectralMeasure::uniform(-1.0, 1.0);

    void validate() const;
};

/// Solution (f_+(z), f_-(z)) of the coupled equations
///   f_a(z) = f0(z - a s + v^2 f_{-a}(z)).
struct StieltjesPair {
    cplx z;
    cplx f_plus;
    cplx f_minus;
    double residual = 0.0;
    int iterations = 0;

    cplx f(int alpha) const { return alpha > 0 ? f_plus : f_minus; }
    StieltjesPair conj() const;
};

struct SolverOptions {
    double tol = 1e-12;
    int max_iterations = 10000;
    double damping = 0.5;
    bool newton = true;
};

/// Max over a of |f_a - f0(z - a s + v^2 f_{-a})|.
double pair_residual(const ModelParams& p, cplx z, cplx f_plus, cplx f_minus);

StieltjesPair solve_pair(const ModelParams& p, cplx z, const SolverOptions& opt = {},
                         const std::optional<StieltjesPair>& warm = std::nullopt);

/// Pairs at lambda + i eta for every lambda, reached by continuation in eta
/// from max(2v, 1) downward by a factor 0.7 per level.
std::vector<StieltjesPair> solve_on_grid(const ModelParams& p, std::span<const double> lambdas,
                                         double eta, const SolverOptions& opt = {});

struct SpectralDensities {
    std::vector<double> lambda;
    std::vector<double> nu_plus;
    std::vector<double> nu_minus;
    std::vector<StieltjesPair> pairs;  // at the finer offset eta1
    double eta1 = 0.0;
    double mass_plus = 0.0;
    double mass_minus = 0.0;
    bool extrapolated = true;  // false: raw Im f / pi at eta1 (atomic reservoir)

    const std::vector<double>& nu(int alpha) const { return alpha > 0 ? nu_plus : nu_minus; }
};

/// Stieltjes inversion from pairs at eta1 and eta1 / 2 on the same lambda grid.
/// Densities are Richardson-extrapolated to eta -> 0; values below 1e-6 of the
/// peak are set to zero.
/// Throws mass_deficit when either trapezoid mass misses 1 by more than mass_tol.
SpectralDensities invert_density(const ModelParams& p, std::span<const StieltjesPair> at_eta1,
                                 std::span<const StieltjesPair> at_eta2, double mass_tol = 1e-3);

/// Solve at eta1 and eta1 / 2 and invert.
SpectralDensities spectral_densities(const ModelParams& p, std::span<const double> lambdas,
                                     double eta1 = 1e-3, const SolverOptions& opt = {},
                                     double mass_tol = 1e-3);

/// Uniform lambda grid covering the support of nu_+ and nu_- with a margin.
std::vector<double> default_lambda_grid(const ModelParams& p, double spacing);

struct EquilibriumState {
    double lambda = 0.0;
    double epsilon = 0.0;
    TwoLevelState omega;
};

EquilibriumState equilibrium_micro(const ModelParams& p, double lambda, double epsilon,
                                   const SpectralDensities& d);

TwoLevelState equilibrium_canonical(const ModelParams& p, double beta, const SpectralDensities& d);

/// Default microcanonical half-width: 5% of the support width.
double default_window(const ModelParams& p);

}  // namespace rmrelax
