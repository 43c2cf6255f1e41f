#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rmrelax/selfconsistent.hpp"

using namespace rmrelax;
using std::numbers::pi;

namespace {

const cplx I(0, 1);
const double golden = 0.6180339887498949;

// Plain damped iteration with the uniform(-1,1) transform written out by hand.
std::pair<cplx, cplx> oracle_uniform_pair(double s, double v, cplx z, cplx fp, cplx fm) {
    auto g = [](cplx w) { return 0.5 * (std::log(1.0 - w) - std::log(-1.0 - w)); };
    for (int i = 0; i < 200000; ++i) {
        const cplx np = g(z - s + v * v * fm);
        const cplx nm = g(z + s + v * v * fp);
        const double d = std::max(std::abs(np - fp), std::abs(nm - fm));
        fp = 0.7 * fp + 0.3 * np;
        fm = 0.7 * fm + 0.3 * nm;
        if (d < 1e-15) break;
    }
    return {fp, fm};
}

}  // namespace

TEST_CASE("v = 0 decouples") {
    ModelParams p{0.3, 0.0, SpectralMeasure::semicircle(2)};
    const auto pair = solve_pair(p, I);
    CHECK(std::abs(pair.f_plus - f0(p.measure, I - 0.3)) == 0.0);
    CHECK(std::abs(pair.f_minus - f0(p.measure, I + 0.3)) == 0.0);
    const std::vector<double> grid{-1.0, 0.0, 0.7};
    const auto pairs = solve_on_grid(p, grid, 0.01);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(pairs[i].f_plus - f0(p.measure, cplx(grid[i], 0.01) - 0.3)) < 1e-15);
}

TEST_CASE("single atom gives the semicircle law") {
    ModelParams p{0.0, 1.0, SpectralMeasure::atoms({{0, 1}})};
    const auto pair = solve_pair(p, I);
    CHECK(std::abs(pair.f_plus - I * golden) < 1e-10);
    CHECK(std::abs(pair.f_minus - I * golden) < 1e-10);
    const std::vector<double> zero{0.0};
    const auto g = solve_on_grid(p, zero, 1.0);
    CHECK(std::abs(g[0].f_plus - pair.f_plus) < 1e-12);
    // Lower half-plane by conjugation.
    const auto low = solve_pair(p, -I);
    CHECK(std::abs(low.f_plus + I * golden) < 1e-10);
}

TEST_CASE("multi-start agreement with the damped-iteration oracle") {
    ModelParams p{0.5, 0.3, SpectralMeasure::uniform(-1, 1)};
    const cplx z = 2.0 * I;
    const auto pair = solve_pair(p, z);
    CHECK(pair.residual <= 1e-12);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(0.01, 1.0);
    for (int k = 0; k < 5; ++k) {
        const auto [fp, fm] = oracle_uniform_pair(0.5, 0.3, z, cplx(d(rng) - 0.5, d(rng)), cplx(d(rng) - 0.5, d(rng)));
        CHECK(std::abs(fp - pair.f_plus) < 1e-10);
        CHECK(std::abs(fm - pair.f_minus) < 1e-10);
        // Warm starts from random Herglotz points land on the same solution.
        StieltjesPair w{z, cplx(0.3 * d(rng), d(rng)), cplx(-0.2, d(rng)), 0, 0};
        const auto again = solve_pair(p, z, {}, w);
        CHECK(std::abs(again.f_plus - pair.f_plus) < 1e-11);
    }
}

TEST_CASE("residual certificate and Herglotz class on a fine grid") {
    ModelParams p{0.25, 0.5, SpectralMeasure::uniform(-1, 1)};
    std::vector<double> grid(201);
    for (int i = 0; i <= 200; ++i) grid[i] = -2.0 + 4.0 * i / 200;
    const auto pairs = solve_on_grid(p, grid, 1e-3);
    for (const auto& q : pairs) {
        CHECK(q.residual <= 1e-12 * std::max(1.0, std::abs(q.f_plus) + std::abs(q.f_minus)));
        CHECK(pair_residual(p, q.z, q.f_plus, q.f_minus) == doctest::Approx(q.residual));
        CHECK(q.f_plus.imag() > 0);
        CHECK(q.f_minus.imag() > 0);
        CHECK(std::abs(q.f_plus) <= 1e3);
    }
}

TEST_CASE("symmetry and shift covariance") {
    ModelParams p{0.0, 0.6, SpectralMeasure::semicircle(1.5)};
    for (double x : {-1.0, 0.2, 0.9}) {
        const auto q = solve_pair(p, {x, 0.05});
        CHECK(std::abs(q.f_plus - q.f_minus) < 1e-11);
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-2, 2);
    ModelParams a{0.3, 0.4, SpectralMeasure::gaussian(0.6)};
    ModelParams b{0.3, 0.4, a.measure.shifted(0.7)};
    for (int i = 0; i < 20; ++i) {
        const cplx z(d(rng), 0.2 + std::abs(d(rng)));
        const auto qa = solve_pair(a, z - 0.7);
        const auto qb = solve_pair(b, z);
        CHECK(std::abs(qa.f_plus - qb.f_plus) < 1e-9);
        CHECK(std::abs(qa.f_minus - qb.f_minus) < 1e-9);
    }
}

TEST_CASE("inversion recovers known densities") {
    {
        ModelParams p{0.0, 0.0, SpectralMeasure::uniform(-1, 1)};
        const auto grid = default_lambda_grid(p, 5e-4);
        const auto d = spectral_densities(p, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(grid[i]) < 0.95) CHECK(std::abs(d.nu_plus[i] - 0.5) < 1e-4);
    }
    {
        ModelParams p{0.0, 1.0, SpectralMeasure::atoms({{0, 1}})};
        const std::vector<double> grid{-1.0, 0.0, 1.0, 1.9};
        const auto a = solve_on_grid(p, grid, 1e-7);
        const auto b = solve_on_grid(p, grid, 5e-8);
        const auto d = invert_density(p, a, b, 1.0);
        CHECK(!d.extrapolated);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(d.nu_plus[i] - std::sqrt(4 - grid[i] * grid[i]) / (2 * pi)) < 1e-5);
    }
    for (double v : {0.2, 0.5}) {
        ModelParams p{0.25, v, SpectralMeasure::uniform(-1, 1)};
        const auto grid = default_lambda_grid(p, 5e-4);
        const auto d = spectral_densities(p, grid);
        CHECK(d.mass_plus == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(d.mass_minus == doctest::Approx(1.0).epsilon(1e-3));
        const double top = std::max(*std::max_element(d.nu_plus.begin(), d.nu_plus.end()),
                                    *std::max_element(d.nu_minus.begin(), d.nu_minus.end()));
        MESSAGE("v = " << v << " max density " << top);
        CHECK(top <= 0.5 + 1e-6);
    }
    {
        ModelParams p{0.25, 0.5, SpectralMeasure::uniform(-1, 1)};
        const std::vector<double> narrow{-0.5, 0.0, 0.5};
        CHECK_THROWS_AS(spectral_densities(p, narrow), Error);
    }
}

TEST_CASE("equilibrium states") {
    {
        ModelParams p{0.0, 0.5, SpectralMeasure::uniform(-1, 1)};
        const auto d = spectral_densities(p, default_lambda_grid(p, 1e-3));
        const auto w = equilibrium_micro(p, 0.3, default_window(p), d);
        CHECK(w.omega(1, 1).real() == doctest::Approx(0.5).epsilon(1e-9));
    }
    {
        ModelParams p{0.25, 0.0, SpectralMeasure::uniform(-1, 1)};
        const auto d = spectral_densities(p, default_lambda_grid(p, 5e-4));
        // nu_+ lives on [-0.75, 1.25], nu_- on [-1.25, 0.75].
        auto w = equilibrium_micro(p, 0.0, 0.05, d);
        CHECK(w.omega(1, 1).real() == doctest::Approx(0.5).epsilon(1e-6));
        w = equilibrium_micro(p, 0.9, 0.05, d);
        CHECK(w.omega(1, 1).real() == doctest::Approx(1.0).epsilon(1e-6));
        w = equilibrium_micro(p, 1.1, 0.05, d);
        CHECK(w.omega(1, 1).real() == doctest::Approx(1.0).epsilon(1e-6));
        w = equilibrium_micro(p, -1.1, 0.05, d);
        CHECK(w.omega(-1, -1).real() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(w.omega.trace_error() < 1e-15);
        CHECK_THROWS_AS(equilibrium_micro(p, 1.6, 0.05, d), Error);
        SpectralDensities table;
        table.lambda = {-1, 0, 1, 2};
        table.nu_plus = {0.5, 0.5, 0, 0};
        table.nu_minus = {0.5, 0.5, 0, 0};
        try {
            equilibrium_micro(p, 1.5, 0.1, table);
            FAIL("expected EmptyWindow");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::empty_window);
        }
    }
    {
        ModelParams p{0.5, 0.0, SpectralMeasure::uniform(-1, 1)};
        const auto d = spectral_densities(p, default_lambda_grid(p, 5e-4));
        auto c = equilibrium_canonical(p, 1.0, d);
        CHECK(c(1, 1).real() == doctest::Approx(0.268941).epsilon(1e-4));
        CHECK(c(-1, -1).real() == doctest::Approx(0.731059).epsilon(1e-4));
        c = equilibrium_canonical(p, 0.0, d);
        CHECK(c(1, 1).real() == doctest::Approx(0.5).epsilon(1e-6));
        double last = 1.0;
        for (double beta : {1.0, 5.0, 20.0, 100.0, 1000.0}) {
            const double pp = equilibrium_canonical(p, beta, d)(1, 1).real();
            CHECK(pp <= last);
            last = pp;
        }
        CHECK(last < 1e-12);
    }
}
