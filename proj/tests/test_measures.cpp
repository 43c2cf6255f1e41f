#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rmrelax/measures.hpp"

using namespace rmrelax;
using std::numbers::pi;

namespace {

double semicircle_density(double e) { return std::abs(e) < 2 ? std::sqrt(4 - e * e) / (2 * pi) : 0.0; }

}  // namespace

TEST_CASE("construction normalizes and validates") {
    auto u = SpectralMeasure::uniform(-1, 1);
    CHECK(u.density(0.3) == doctest::Approx(0.5));
    auto a = SpectralMeasure::atoms({{0, 0.4}, {1, 0.6}});
    CHECK(a.mean() == doctest::Approx(0.6));
    auto t = SpectralMeasure::tabulated({-1, 0, 1}, {1, 1, 1});
    CHECK(t.density(0.2) == doctest::Approx(0.5));
    CHECK(t.cdf(1.0) == doctest::Approx(1.0));

    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::io_error;
    };
    CHECK(kind_of([] { SpectralMeasure::atoms({{0, 0.0}}); }) == ErrorKind::non_normalizable);
    CHECK(kind_of([] { SpectralMeasure::atoms({{0, -1.0}, {1, 2.0}}); }) == ErrorKind::negative_density);
    CHECK(kind_of([] { SpectralMeasure::tabulated({0, 0, 1}, {1, 1, 1}); }) == ErrorKind::non_monotone_grid);
    CHECK(kind_of([] { SpectralMeasure::tabulated({0, 1}, {1, -1}); }) == ErrorKind::negative_density);
    CHECK(kind_of([] { SpectralMeasure::tabulated({0, 1}, {0, 0}); }) == ErrorKind::non_normalizable);
}

TEST_CASE("json round trip") {
    for (const char* text : {R"({"type":"semicircle","radius":2.0})", R"({"type":"uniform","a":-1,"b":1})",
                             R"({"type":"atoms","atoms":[[0,0.4],[1,0.6]]})",
                             R"({"type":"gaussian","sigma":1.5})",
                             R"({"type":"tabulated","grid":[-1,0,1],"values":[0,1,0]})"}) {
        const auto m = make_measure(nlohmann::json::parse(text));
        const auto again = make_measure(describe(m));
        CHECK(describe(again) == describe(m));
    }
}

TEST_CASE("f0 closed forms") {
    const cplx I(0, 1);
    CHECK(std::abs(f0(SpectralMeasure::atoms({{0, 1}}), I) - I) < 1e-15);
    const cplx fu = f0(SpectralMeasure::uniform(-1, 1), I);
    CHECK(std::abs(fu - I * (pi / 4)) < 1e-14);
    CHECK(std::abs(fu - oracle::stieltjes([](double) { return 0.5; }, -1, 1, I)) < 1e-10);
    const cplx fs = f0(SpectralMeasure::semicircle(2), I);
    CHECK(std::abs(fs - I * 0.6180339887498949) < 1e-12);
    CHECK(std::abs(fs - oracle::stieltjes(semicircle_density, -2, 2, I)) < 1e-8);

    try {
        f0(SpectralMeasure::uniform(-1, 1), 0.5);
        FAIL("expected RealAxisEvaluation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::real_axis_evaluation);
    }
}

TEST_CASE("f0 for quadrature-based variants matches oracle") {
    const auto g = SpectralMeasure::gaussian(1.0);
    const auto t = SpectralMeasure::tabulated({-1, 0, 0.5, 2}, {0, 1, 0.3, 0});
    for (cplx z : {cplx(0.3, 1.0), cplx(-1.2, 0.05), cplx(0.1, -0.3), cplx(5.0, 0.01)}) {
        const cplx og = oracle::stieltjes([&](double e) { return g.density(e); }, -8, 8, z, 400000);
        CHECK(std::abs(f0(g, z) - og) < 1e-7);
        const cplx ot = oracle::stieltjes([&](double e) { return t.density(e); }, -1, 2, z, 400000);
        CHECK(std::abs(f0(t, z) - ot) < 1e-7);
    }
}

TEST_CASE("Herglotz property, conjugate symmetry and decay") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-4, 4), lg(-2, 2);
    std::vector<SpectralMeasure> ms{SpectralMeasure::uniform(-1, 1), SpectralMeasure::semicircle(2),
                                    SpectralMeasure::atoms({{0, 0.5}, {1, 0.5}}),
                                    SpectralMeasure::tabulated({-1, 0, 1}, {0, 2, 0})};
    for (const auto& m : ms) {
        for (int i = 0; i < 1000; ++i) {
            const double eta = std::pow(10.0, lg(rng)) * (i % 2 ? 1 : -1);
            const cplx z(re(rng), eta);
            const cplx f = f0(m, z);
            CHECK(f.imag() * eta > 0);
            CHECK(std::abs(f) <= 1 / std::abs(eta) * (1 + 1e-12));
            CHECK(std::abs(f0(m, std::conj(z)) - std::conj(f)) < 1e-12);
        }
        const cplx z(0, 1e3);
        CHECK(std::abs(z * f0(m, z) + 1.0) < 1e-2);
    }
}

TEST_CASE("derivative matches finite differences") {
    for (const auto& m : {SpectralMeasure::uniform(-1, 1), SpectralMeasure::semicircle(2),
                          SpectralMeasure::gaussian(0.7), SpectralMeasure::tabulated({-1, 0, 1}, {0, 2, 0})}) {
        const cplx z(0.4, 0.3), h(1e-5, 0);
        const cplx fd = (f0(m, z + h) - f0(m, z - h)) / (2.0 * h);
        CHECK(std::abs(f0_derivative(m, z) - fd) < 1e-6);
    }
}

TEST_CASE("boundary values") {
    const auto u = SpectralMeasure::uniform(-1, 1);
    auto b = f0_boundary(u, 0, Side::above);
    CHECK(std::abs(b.value() - cplx(0, pi / 2)) < 1e-14);
    b = f0_boundary(u, 3, Side::above);
    CHECK(b.real == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-12));
    CHECK(b.imag == 0.0);
    const double ref = oracle::simpson([](double e) { return 0.5 / (e - 3); }, -1, 1, 20000);
    CHECK(std::abs(b.real - ref) < 1e-10);
    b = f0_boundary(SpectralMeasure::semicircle(2), 0, Side::above);
    CHECK(std::abs(b.value() - cplx(0, 1)) < 1e-14);
    b = f0_boundary(SpectralMeasure::semicircle(2), 0.5, Side::below);
    CHECK(b.imag == doctest::Approx(-pi * semicircle_density(0.5)));

    // Limits from above for every density variant.
    for (const auto& m : {SpectralMeasure::uniform(-1, 1), SpectralMeasure::semicircle(2),
                          SpectralMeasure::gaussian(1.0), SpectralMeasure::tabulated({-1, 0, 1}, {0, 2, 0})}) {
        for (double lam : {-0.6, 0.05, 0.3, 1.7}) {
            const cplx fb = f0_boundary(m, lam, Side::above).value();
            const cplx near = f0(m, cplx(lam, 1e-7));
            CHECK(std::abs(fb - near) < 1e-5);
        }
    }
    try {
        f0_boundary(SpectralMeasure::atoms({{0, 1}}), 0.5, Side::above);
        FAIL("expected AtomicMeasure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::atomic_measure);
    }
}

TEST_CASE("Richardson inversion of f0 recovers the density") {
    const auto m = SpectralMeasure::semicircle(2);
    for (double lam : {-1.5, 0.0, 0.8}) {
        const double a = f0(m, cplx(lam, 1e-3)).imag() / pi;
        const double b = f0(m, cplx(lam, 5e-4)).imag() / pi;
        CHECK(std::abs(2 * b - a - semicircle_density(lam)) < 1e-4);
    }
}

TEST_CASE("fourier transform") {
    CHECK(std::abs(fourier_hat(SpectralMeasure::semicircle(2), 0) - 1.0) < 1e-15);
    CHECK(std::abs(fourier_hat(SpectralMeasure::uniform(-1, 1), pi)) < 1e-15);
    CHECK(std::abs(fourier_hat(SpectralMeasure::gaussian(1), 1) - std::exp(-0.5)) < 1e-12);
    const auto t = SpectralMeasure::tabulated({-1, 0, 0.5, 2}, {0, 1, 0.3, 0});
    for (double u : {0.7, 3.0, 11.0}) {
        auto re = oracle::simpson([&](double e) { return t.density(e) * std::cos(u * e); }, -1, 2, 60000);
        auto im = oracle::simpson([&](double e) { return -t.density(e) * std::sin(u * e); }, -1, 2, 60000);
        CHECK(std::abs(fourier_hat(t, u) - cplx(re, im)) < 1e-9);
        const auto s = SpectralMeasure::semicircle(2, 0.3);
        auto sre = oracle::simpson([&](double e) { return s.density(e) * std::cos(u * e); }, -1.7, 2.3, 400000);
        auto sim = oracle::simpson([&](double e) { return -s.density(e) * std::sin(u * e); }, -1.7, 2.3, 400000);
        CHECK(std::abs(fourier_hat(s, u) - cplx(sre, sim)) < 1e-6);
    }
}

TEST_CASE("c0 estimates") {
    const auto g = c0_bound(SpectralMeasure::gaussian(1), 20);
    CHECK(g.value == doctest::Approx(std::sqrt(2 * pi)).epsilon(1e-8));
    const auto s = c0_bound(SpectralMeasure::semicircle(2), 200);
    CHECK(s.decay_exponent == doctest::Approx(1.5).epsilon(0.1));
    CHECK(s.value > 0);
    MESSAGE("semicircle c0 = " << s.value);
    try {
        c0_bound(SpectralMeasure::uniform(-1, 1), 200);
        FAIL("expected DivergentTail");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::divergent_tail);
    }
}

TEST_CASE("quantile discretization") {
    auto q = quantile_eigenvalues(SpectralMeasure::uniform(-1, 1), 2);
    CHECK(q[0] == doctest::Approx(-0.5));
    CHECK(q[1] == doctest::Approx(0.5));
    q = quantile_eigenvalues(SpectralMeasure::atoms({{0, 1}}), 3);
    CHECK(q == std::vector<double>{0, 0, 0});
    q = quantile_eigenvalues(SpectralMeasure::atoms({{0, 1.0 / 3}, {1, 2.0 / 3}}), 4);
    CHECK(q == std::vector<double>{0, 1, 1, 1});

    const auto sc = SpectralMeasure::semicircle(2);
    q = quantile_eigenvalues(sc, 4);
    for (int j = 0; j < 4; ++j) {
        const double target = (j + 0.5) / 4;
        const double ref = oracle::bisect(
            [&](double e) {
                // E = -2 cos(theta) removes the square-root edge.
                const double th = std::acos(-e / 2);
                return oracle::simpson([](double x) { return 2 * std::sin(x) * std::sin(x) / pi; }, 0, th,
                                       20000) -
                       target;
            },
            -2, 2);
        CHECK(q[j] == doctest::Approx(ref).epsilon(1e-8));
        CHECK(q[j] == doctest::Approx(-q[3 - j]).epsilon(1e-12));
    }

    for (const auto& m : {SpectralMeasure::gaussian(1), SpectralMeasure::tabulated({-1, 0, 1}, {0, 2, 0})}) {
        const std::size_t n = 57;
        q = quantile_eigenvalues(m, n);
        double worst = 0;
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(m.cdf(q[j]) - double(j) / n));
            worst = std::max(worst, std::abs(m.cdf(q[j]) - double(j + 1) / n));
        }
        CHECK(worst <= 1.0 / n + 1e-12);
    }
}

TEST_CASE("moments and shifts") {
    const auto t = SpectralMeasure::tabulated({-1, 0, 0.5, 2}, {0, 1, 0.3, 0});
    const double m1 = oracle::simpson([&](double e) { return e * t.density(e); }, -1, 2, 60000);
    const double m2 = oracle::simpson([&](double e) { return e * e * t.density(e); }, -1, 2, 60000);
    CHECK(t.mean() == doctest::Approx(m1).epsilon(1e-8));
    CHECK(t.variance() == doctest::Approx(m2 - m1 * m1).epsilon(1e-8));
    const auto g = SpectralMeasure::gaussian(1, 3);
    const double gv = oracle::simpson([&](double e) { return e * e * g.density(e); }, -3, 3, 60000);
    CHECK(g.variance() == doctest::Approx(gv).epsilon(1e-9));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-3, 3);
    for (const auto& m : {SpectralMeasure::uniform(-1, 1), SpectralMeasure::gaussian(0.5),
                          SpectralMeasure::tabulated({-1, 0, 1}, {0, 2, 0})}) {
        const auto sh = m.shifted(0.7);
        for (int i = 0; i < 20; ++i) {
            const cplx z(d(rng), 0.1 + std::abs(d(rng)));
            CHECK(std::abs(f0(sh, z) - f0(m, z - 0.7)) < 1e-9);
        }
    }
}
