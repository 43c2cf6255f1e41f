#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rmrelax/error.hpp"
#include "rmrelax/quadrature.hpp"

namespace rmrelax {

using cplx = std::complex<double>;

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

namespace measure {

struct Atoms {
    std::vector<Atom> atoms;  // sorted by location, weights sum to 1
};

struct Semicircle {
    double radius = 2.0;
    double center = 0.0;
};

struct Uniform {
    double a = -1.0;
    double b = 1.0;
};

struct Gaussian {
    double sigma = 1.0;
    double half_width = 8.0;  // truncation, in units of sigma
    double center = 0.0;
    double norm = 1.0;        // 1 / (sigma sqrt(2 pi) erf(half_width / sqrt 2))
};

// Piecewise-linear density on a strictly increasing grid, zero outside.
struct Tabulated {
    std::vector<double> grid;
    std::vector<double> values;
};

}  // namespace measure

enum class MeasureKind { atoms, semicircle, uniform, gaussian, tabulated };

/// The reservoir eigenvalue law. Always a probability measure: constructors
/// renormalize and reject inputs that cannot be normalized.
class SpectralMeasure {
public:
    using Variant = std::variant<measure::Atoms, measure::Semicircle, measure::Uniform,
                                 measure::Gaussian, measure::Tabulated>;

    static SpectralMeasure atoms(std::vector<Atom> atoms);
    static SpectralMeasure semicircle(double radius, double center = 0.0);
    static SpectralMeasure uniform(double a, double b);
    static SpectralMeasure gaussian(double sigma, double half_width = 8.0, double center = 0.0);
    static SpectralMeasure tabulated(std::vector<double> grid, std::vector<double> values);

    MeasureKind kind() const;
    const Variant& variant() const { return data_; }

    bool has_density() const { return kind() != MeasureKind::atoms; }

    /// Density at e; zero for the atomic variant.
    double density(double e) const;
    /// Derivative of the density (zero outside the support and for atoms).
    double density_slope(double e) const;
    double sup_density() const;

    /// Closed convex hull of the support.
    std::pair<double, double> support() const;
    /// Support endpoints plus interior points where the density is not smooth.
    std::vector<double> breakpoints() const;

    double mean() const;
    double variance() const;
    double cdf(double e) const;

    /// The measure translated by c: nu(dE) -> nu(d(E - c)).
    SpectralMeasure shifted(double c) const;

private:
    explicit SpectralMeasure(Variant data) : data_(std::move(data)) {}
    Variant data_;
};

/// Builds a measure from a tagged description such as
/// {"type": "semicircle", "radius": 2.0}.
SpectralMeasure make_measure(const nlohmann::json& spec);
nlohmann::json describe(const SpectralMeasure& m);

/// Stieltjes transform  int nu(dE) / (E - z),  Im z != 0.
cplx f0(const SpectralMeasure& m, cplx z);
/// d/dz of f0.
cplx f0_derivative(const SpectralMeasure& m, cplx z);

enum class Side { above = 1, below = -1 };

struct BoundaryValue {
    double real = 0.0;  // principal value integral
    double imag = 0.0;  // side * pi * density
    Side side = Side::above;

    cplx value() const { return {real, imag}; }
};

/// f0(lambda +- i0) for measures with a density.
BoundaryValue f0_boundary(const SpectralMeasure& m, double lambda, Side side);

/// int exp(-i u E) nu(dE).
cplx fourier_hat(const SpectralMeasure& m, double u);

struct C0Estimate {
    double value = 0.0;           // int_{-cap}^{cap} |hat nu(u)| du + tail
    double integral = 0.0;        // the part over |u| <= cap
    double tail = 0.0;            // extrapolated |u| > cap contribution
    double decay_exponent = 0.0;  // fitted p in |hat nu(u)| ~ u^{-p}
};

/// Estimate of int |hat nu(u)| du. Throws divergent_tail when the fitted decay
/// is not integrable or the tail exceeds tail_tol * value.
C0Estimate c0_bound(const SpectralMeasure& m, double cap, double tail_tol = 0.25);

/// Deterministic n-point discretization: E_j = F^{-1}((j - 1/2) / n), sorted.
std::vector<double> quantile_eigenvalues(const SpectralMeasure& m, std::size_t n);

/// int g(E) nu(dE) by exact summation (atoms) or adaptive quadrature.
template <class F>
auto integrate(const SpectralMeasure& m, const F& g, double abs_tol = 1e-13,
               double rel_tol = 1e-11) -> decltype(g(0.0)) {
    using T = decltype(g(0.0));
    if (const auto* at = std::get_if<measure::Atoms>(&m.variant())) {
        T sum{};
        for (const Atom& a : at->atoms) sum += a.weight * g(a.location);
        return sum;
    }
    const std::vector<double> breaks = m.breakpoints();
    auto integrand = [&](double e) -> T { return m.density(e) * g(e); };
    return quad::adaptive(integrand, std::span<const double>(breaks), abs_tol, rel_tol, 20000)
        .value;
}

}  // namespace rmrelax
