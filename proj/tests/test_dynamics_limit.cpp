#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rmrelax/dynamics_limit.hpp"

using namespace rmrelax;
using std::numbers::pi;

namespace {

const cplx I(0, 1);

TwoLevelState generic_state() {
    Eigen::Matrix2cd r;
    r << 0.6, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.4;
    return TwoLevelState::validated(r);
}

}  // namespace

TEST_CASE("f_E") {
    ModelParams free{0.3, 0.0, SpectralMeasure::uniform(-1, 1)};
    const cplx z(0.2, 0.7);
    const auto f = f_E(free, 0.1, z, solve_pair(free, z));
    CHECK(std::abs(f(0, 0) - 1.0 / (0.4 - z)) < 1e-15);
    CHECK(std::abs(f(1, 1) - 1.0 / (-0.2 - z)) < 1e-15);
    CHECK(f(0, 1) == 0.0);

    ModelParams sc{0.0, 1.0, SpectralMeasure::atoms({{0, 1}})};
    const auto g = f_E(sc, 0.0, I, solve_pair(sc, I));
    CHECK(std::abs(g(0, 0) - 0.6180339887498949 * I) < 1e-10);

    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const cplx w(0.3, 0.2);
    const auto up = f_E(p, 0.1, w, solve_pair(p, w));
    const auto dn = f_E(p, 0.1, std::conj(w), solve_pair(p, std::conj(w)));
    CHECK(std::abs(dn(0, 0) - std::conj(up(0, 0))) < 1e-13);
    CHECK(up.cwiseAbs().maxCoeff() <= 1 / w.imag());
}

TEST_CASE("two-point function") {
    ModelParams free{0.0, 0.0, SpectralMeasure::atoms({{0, 1}})};
    const cplx z1(0.3, 0.5), z2(-0.2, -0.4);
    const auto a = solve_pair(free, z1), b = solve_pair(free, z2);
    CHECK(std::abs(two_point(free, 1, -1, a, b) - 1.0 / (z1 * z2)) < 1e-14);

    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const cplx y1(1, 0.1);
    const auto q1 = solve_pair(p, y1), q2 = solve_pair(p, std::conj(y1));
    for (int beta : {1, -1}) {
        const cplx v = two_point(p, beta, beta, q1, q2);
        CHECK(std::abs(v.imag()) < 1e-12);
        CHECK(v.real() > 0);
        const cplx dz = q1.z - q2.z;
        const cplx identity = (q1.f(beta) - q2.f(beta)) / (dz + p.v * p.v * (q1.f(-beta) - q2.f(-beta)));
        CHECK(std::abs(v - identity) < 1e-9);
    }
    // Partial fractions against quadrature for mixed indices.
    for (int beta : {1, -1})
        for (int gamma : {1, -1})
            CHECK(std::abs(two_point(p, beta, gamma, q1, q2) - two_point_resolved(p, beta, gamma, q1, q2)) < 1e-10);
}

TEST_CASE("propagator limits") {
    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const auto u0 = u_E(p, 0.1, 0.0);
    CHECK((u0 - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((u_mean(p, 0.0) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-6);

    ModelParams free{0.25, 0.0, SpectralMeasure::uniform(-1, 1)};
    for (double t : {0.5, 3.0, 10.0}) {
        const auto u = u_E(free, 0.1, t);
        CHECK(std::abs(u(0, 0) - std::exp(I * (0.35 * t))) < 1e-6);
        CHECK(std::abs(u(1, 1) - std::exp(I * (-0.15 * t))) < 1e-6);
        const auto m = u_mean(free, t);
        CHECK(std::abs(m(0, 0) - std::exp(I * (0.25 * t)) * fourier_hat(free.measure, -t)) < 1e-6);
        CHECK(std::abs(m(1, 1) - std::exp(I * (-0.25 * t)) * fourier_hat(free.measure, -t)) < 1e-6);
    }

    // Semicircle: f(0, z) = f(z), so U_0(t) = u(t) = J1(2t) / t.
    ModelParams sc{0.0, 1.0, SpectralMeasure::atoms({{0, 1}})};
    for (double t : {0.7, 2.0, 5.0}) {
        const double exact = std::cyl_bessel_j(1.0, 2 * t) / t;
        CHECK(std::abs(u_E(sc, 0.0, t)(0, 0) - exact) < 1e-6);
        CHECK(std::abs(u_mean(sc, t)(1, 1) - exact) < 1e-6);
    }

    // Norm bound on the diagonal.
    for (double t = 0.0; t <= 10.0; t += 1.25) {
        const auto u = u_E(p, 0.0, t);
        CHECK(std::abs(u(0, 0)) <= 1 + 1e-6);
        CHECK(std::abs(u(1, 1)) <= 1 + 1e-6);
    }
}

TEST_CASE("u(t) agrees with the Fourier transform of the inverted density") {
    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const auto grid = default_lambda_grid(p, 5e-4);
    const auto d = spectral_densities(p, grid);
    for (double t : {0.5, 2.0, 4.0}) {
        const auto u = u_mean(p, t);
        for (int alpha : {1, -1}) {
            cplx ft = 0;
            const auto& nu = d.nu(alpha);
            for (std::size_t i = 0; i + 1 < grid.size(); ++i)
                ft += 0.5 * (grid[i + 1] - grid[i]) *
                      (std::exp(I * grid[i] * t) * nu[i] + std::exp(I * grid[i + 1] * t) * nu[i + 1]);
            CHECK(std::abs(u(level(alpha), level(alpha)) - ft) < 1e-3);
        }
    }
}

TEST_CASE("zero coupling is exact") {
    ModelParams p{0.25, 0.0, SpectralMeasure::semicircle(2)};
    const auto r0 = generic_state();
    for (double t : {0.0, 0.3, 1.0, 4.0, 10.0}) {
        const auto r = rho_limit(p, 0.2, t, r0);
        for (int a : {1, -1})
            for (int b : {1, -1})
                CHECK(std::abs(r(a, b) - std::exp(-I * (t * p.s * (a - b))) * r0(a, b)) < 1e-10);
    }
}

TEST_CASE("initial condition, trace, hermiticity") {
    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const auto r0 = generic_state();
    const auto at0 = rho_limit(p, 0.0, 0.0, r0);
    CHECK((at0.matrix() - r0.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    for (double t : {0.5, 1.5, 5.0}) {
        const auto r = rho_limit(p, 0.0, t, r0);
        CHECK(r.trace_error() < 1e-5);
        CHECK(r.hermiticity_error() < 1e-5);
        CHECK(r.eigenvalues()(0) > -1e-5);
    }
}

TEST_CASE("short-time expansion") {
    // rho_{++}(t) = 1 - v^2 t^2 + O(t^4) for rho0 = diag(1, 0).
    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const double t = 0.05;
    const auto r = rho_limit(p, 0.0, t, TwoLevelState::diagonal(1, 0));
    CHECK(std::abs(r(1, 1).real() - (1 - p.v * p.v * t * t)) < 1e-5);
}

TEST_CASE("contour independence") {
    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const auto r0 = generic_state();
    ContourSpec a, b;
    a.eta1 = a.eta2 = 0.2;
    b.eta1 = b.eta2 = 0.4;
    const auto ra = rho_limit(p, 0.0, 1.0, r0, a);
    const auto rb = rho_limit(p, 0.0, 1.0, r0, b);
    CHECK((ra.matrix() - rb.matrix()).cwiseAbs().maxCoeff() < 5e-6);
    ContourSpec c;
    c.eta1 = 0.15;
    c.eta2 = 0.35;
    const auto rc = rho_limit(p, 0.0, 1.0, r0, c);
    CHECK((ra.matrix() - rc.matrix()).cwiseAbs().maxCoeff() < 5e-6);
}

TEST_CASE("trajectory and errors") {
    ModelParams p{0.25, 0.4, SpectralMeasure::uniform(-1, 1)};
    const std::vector<double> times{0.0, 0.5, 1.0};
    const auto tr = evolve(p, 2.5, times, TwoLevelState::diagonal(1, 0));
    CHECK(tr.states.size() == 3);
    CHECK(tr.meta["outside_support"].get<bool>());
    const std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS(evolve(p, 0.0, bad, TwoLevelState()), Error);
    ContourSpec tight;
    tight.tol = 1e-14;
    tight.max_doublings = 0;
    try {
        rho_limit(p, 0.0, 1.0, TwoLevelState(), tight);
        FAIL("expected QuadratureBudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::quadrature_budget_exceeded);
    }
}
