#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmrelax/finite_n.hpp"

using namespace rmrelax;
using std::numbers::pi;

namespace {

const cplx I(0, 1);

FiniteModel model(double s, double v, std::size_t n, std::uint64_t seed = 1) {
    return FiniteModel::build({s, v, SpectralMeasure::uniform(-1, 1)}, n, 0.0, seed);
}

}  // namespace

TEST_CASE("GUE sampling") {
    std::mt19937_64 rng(3);
    const auto one = sample_gue(1, rng);
    CHECK(one(0, 0).imag() == 0.0);

    std::mt19937_64 a(42), b(42);
    CHECK(sample_gue(30, a) == sample_gue(30, b));

    // Entry moments over 10^4 draws of a 200 x 200 matrix.
    const int draws = 10000;
    double d11 = 0, d11sq = 0, r12 = 0, r12sq = 0, i12sq = 0;
    std::mt19937_64 rng2(9);
    for (int k = 0; k < draws; ++k) {
        const auto w = sample_gue(200, rng2);
        CHECK_MESSAGE(w == w.adjoint(), "sample is not Hermitian");
        d11 += w(0, 0).real();
        d11sq += std::norm(w(0, 0));
        r12 += w(0, 1).real();
        r12sq += w(0, 1).real() * w(0, 1).real();
        i12sq += w(0, 1).imag() * w(0, 1).imag();
    }
    const double m11 = d11 / draws, m12 = r12 / draws;
    CHECK(std::abs(d11sq / draws - m11 * m11 - 1.0) < 0.05);
    CHECK(std::abs(r12sq / draws - m12 * m12 - 0.5) < 0.03);
    CHECK(std::abs(i12sq / draws - 0.5) < 0.03);
}

TEST_CASE("composite Hamiltonian") {
    auto fm = model(0.25, 0.0, 4);
    std::mt19937_64 rng(1);
    const auto w = sample_gue(4, rng);
    const auto h0 = assemble_h(fm, w);
    CHECK(h0.isDiagonal());
    for (int j = 0; j < 4; ++j) {
        CHECK(h0(j, j).real() == fm.eigenvalues[j] + 0.25);
        CHECK(h0(4 + j, 4 + j).real() == fm.eigenvalues[j] - 0.25);
    }
    FiniteModel tiny = FiniteModel::build({1.0, 1.0, SpectralMeasure::atoms({{0, 1}})}, 1, 0.0, 0);
    Eigen::MatrixXcd omega(1, 1);
    omega(0, 0) = 0.7;
    Eigen::Matrix2cd expect;
    expect << 1, 0.7, 0.7, -1;
    CHECK(assemble_h(tiny, omega) == Eigen::MatrixXcd(expect));
    fm.params.v = 1.3;
    const auto h = assemble_h(fm, w);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduced density: exact cases") {
    Eigen::Matrix2cd r;
    r << 0.7, cplx(0.1, 0.3), cplx(0.1, -0.3), 0.3;
    const auto rho0 = TwoLevelState::validated(r);
    auto fm = model(0.25, 0.8, 20);
    std::mt19937_64 rng(5);
    const auto w = sample_gue(20, rng);
    CHECK((reduced_density(fm, w, rho0, 0.0).matrix() - r).cwiseAbs().maxCoeff() < 1e-12);

    fm.params.v = 0.0;
    for (double t : {0.3, 2.0, 9.0}) {
        const auto x = reduced_density(fm, w, rho0, t);
        for (int a : {1, -1})
            for (int d : {1, -1})
                CHECK(std::abs(x(a, d) - std::exp(-I * (t * 0.25 * (a - d))) * rho0(a, d)) < 1e-10);
    }

    // Rabi oscillation of H = [[1, 1], [1, -1]].
    FiniteModel tiny = FiniteModel::build({1.0, 1.0, SpectralMeasure::atoms({{0, 1}})}, 1, 0.0, 0);
    Eigen::MatrixXcd one(1, 1);
    one(0, 0) = 1.0;
    const double t = pi / (2 * std::sqrt(2.0));
    const auto x = reduced_density(tiny, one, TwoLevelState::diagonal(1, 0), t);
    CHECK(x(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    for (double tt : {0.2, 1.1, 3.7}) {
        const auto y = reduced_density(tiny, one, TwoLevelState::diagonal(1, 0), tt);
        const double sn = std::sin(std::sqrt(2.0) * tt);
        CHECK(y(1, 1).real() == doctest::Approx(1 - sn * sn / 2).epsilon(1e-12));
    }
}

TEST_CASE("unitarity and per-sample density property") {
    auto fm = model(0.25, 1.0, 40);
    std::mt19937_64 rng(8);
    const SampleEvolution ev(assemble_h(fm, sample_gue(40, rng)));
    for (double t : {0.5, 3.0}) {
        const auto u = ev.propagator(t);
        const auto back = ev.propagator(-t);
        CHECK((u * back - Eigen::MatrixXcd::Identity(80, 80)).cwiseAbs().maxCoeff() < 1e-10);
        const TwoLevelState st(ev.reduced(TwoLevelState::diagonal(0.3, 0.7), 7, t));
        CHECK(st.trace_error() < 1e-10);
        CHECK(st.hermiticity_error() < 1e-10);
        CHECK(st.eigenvalues()(0) > -1e-10);
        // Reduced state from the explicit propagator.
        Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(80, 80);
        mu(7, 7) = 0.3;
        mu(47, 47) = 0.7;
        const Eigen::MatrixXcd evolved = back * mu * u;
        CHECK(std::abs(evolved.topLeftCorner(40, 40).trace() - st(1, 1)) < 1e-12);
        CHECK(std::abs(evolved.topRightCorner(40, 40).trace() - st(1, -1)) < 1e-12);
    }
}

TEST_CASE("ensemble statistics") {
    const std::vector<double> times{0.5, 1.0};
    auto free = model(0.25, 0.0, 30);
    const auto st0 = ensemble_run(free, TwoLevelState::diagonal(1, 0), times, 5);
    for (const auto& v : st0.variance) CHECK(v.maxCoeff() == 0.0);

    auto fm = model(0.25, 1.0, 100, 17);
    const std::vector<double> t1{1.0};
    const auto st = ensemble_run(fm, TwoLevelState::diagonal(1, 0), t1, 200);
    CHECK(st.variance[0].maxCoeff() <= 8.0 / 100);
    CHECK(st.mean[0].trace_error() < 1e-10);
    MESSAGE("n=100 variance " << st.variance[0].maxCoeff());

    // Same seed, same numbers.
    const auto again = ensemble_run(fm, TwoLevelState::diagonal(1, 0), t1, 200);
    CHECK(again.mean[0].matrix() == st.mean[0].matrix());

    // Self-averaging: variance drops with n.
    double last = HUGE_VAL;
    for (std::size_t n : {25, 50, 100}) {
        const auto s = ensemble_run(model(0.25, 1.0, n, 3), TwoLevelState::diagonal(1, 0), t1, 100);
        const double v = s.variance[0].maxCoeff();
        CHECK(v < last);
        last = v;
    }

    // Canonical mixture stays a density matrix.
    const auto wts = canonical_initial_weights(fm, 2.0);
    const auto mix = ensemble_run(model(0.25, 1.0, 20), TwoLevelState::diagonal(1, 0), t1, 4,
                                  canonical_initial_weights(model(0.25, 1.0, 20), 2.0));
    CHECK(mix.mean[0].trace_error() < 1e-10);
    CHECK(wts.size() == 100);
}

TEST_CASE("propagator fluctuation bounds") {
    const std::size_t n = 40, M = 200;
    auto fm = model(0.25, 1.0, n, 21);
    const double t = 1.0;
    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::size_t i = 0; i < M; ++i) {
        std::mt19937_64 rng(sample_seed(fm.seed, i));
        const auto u = SampleEvolution(assemble_h(fm, sample_gue(n, rng))).propagator(t);
        const Eigen::MatrixXcd delta = u - mean;
        mean += delta / double(i + 1);
        m2 += delta.conjugate().cwiseProduct(u - mean).real();
    }
    const Eigen::MatrixXd var = m2 / double(M - 1);
    // Var U <= v^2 t^2 / n plus a 3 sigma band for a chi-square-like estimate.
    const double bound = 1.0 / n;
    CHECK(var.maxCoeff() <= bound * (1 + 3 * std::sqrt(2.0 / M)));
    // Mean is diagonal in the reservoir index.
    double off = 0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (j != k)
                for (int a : {0, 1})
                    for (int b : {0, 1}) off = std::max(off, std::abs(mean(a * n + j, b * n + k)));
    CHECK(off <= 4 / std::sqrt(double(M)));
}

TEST_CASE("empirical measure and resolvent trace") {
    auto fm = model(0.25, 0.0, 10);
    std::mt19937_64 rng(2);
    const auto w = sample_gue(10, rng);
    std::vector<double> edges;
    for (int i = 0; i <= 30; ++i) edges.push_back(-1.5 + 0.1 * i);
    const auto h = empirical_measure(fm, w, edges);
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        double expect = 0;
        for (double e : fm.eigenvalues)
            if (e + 0.25 >= edges[b] && e + 0.25 < edges[b + 1]) expect += 0.1;
        CHECK(h(1, 1)[b].real() == doctest::Approx(expect));
        CHECK(h(1, -1)[b] == cplx(0));
    }
    const cplx z(0.3, 0.2);
    const auto g = resolvent_trace(fm, w, z);
    cplx expect = 0;
    for (double e : fm.eigenvalues) expect += 0.1 / (e - 0.25 - z);
    CHECK(std::abs(g(1, 1) - expect) < 1e-13);
    CHECK(std::abs(g(0, 1)) < 1e-13);

    fm.params.v = 1.0;
    const auto hv = empirical_measure(fm, w, std::vector<double>{-10, 0, 10});
    cplx total = 0, cross = 0;
    for (std::size_t b = 0; b < 2; ++b) {
        total += hv(1, 1)[b] + hv(-1, -1)[b];
        cross += hv(1, -1)[b];
    }
    CHECK(std::abs(total - 2.0) < 1e-12);
    CHECK(std::abs(cross) < 1e-12);
    const auto gv = resolvent_trace(fm, w, 0.5 * I);
    CHECK(gv.cwiseAbs().maxCoeff() <= 2.0);
    CHECK_THROWS_AS(empirical_measure(fm, w, std::vector<double>{-0.1, 0.1}), Error);
}

TEST_CASE("canonical initial weights") {
    auto fm = model(0.25, 0.0, 7);
    for (double x : canonical_initial_weights(fm, 0.0)) CHECK(x == doctest::Approx(1.0 / 7));
    const auto cold = canonical_initial_weights(fm, 1e6);
    CHECK(cold[0] == doctest::Approx(1.0));
    FiniteModel two = FiniteModel::build({0, 0, SpectralMeasure::uniform(-1, 1)}, 2, 0, 0);
    const auto p = canonical_initial_weights(two, 1.0);
    CHECK(p[0] == doctest::Approx(0.731059).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(0.268941).epsilon(1e-6));
}
