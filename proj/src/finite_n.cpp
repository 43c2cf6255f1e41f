#include "rmrelax/finite_n.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rmrelax {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void check_density(const Eigen::Matrix2cd& r, double t) {
    const TwoLevelState st(r);
    const double lo = st.eigenvalues()(0);
    if (st.trace_error() > 1e-10 || st.hermiticity_error() > 1e-10 || lo < -1e-10) {
        std::ostringstream os;
        os << "reduced density at t = " << t << " is not a density matrix: trace error " << st.trace_error()
           << ", hermiticity error " << st.hermiticity_error() << ", smallest eigenvalue " << lo;
        fail(ErrorKind::eigendecomposition_failure, os.str());
    }
}

}  // namespace

FiniteModel FiniteModel::build(const ModelParams& params, std::size_t n, double E, std::uint64_t seed) {
    params.validate();
    if (n < 1) fail(ErrorKind::invalid_argument, "reservoir dimension n must be >= 1");
    FiniteModel fm;
    fm.n = n;
    fm.params = params;
    fm.seed = seed;
    fm.eigenvalues = quantile_eigenvalues(params.measure, n);
    fm.k = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(fm.eigenvalues[j] - E) < std::abs(fm.eigenvalues[fm.k] - E)) fm.k = j;
    return fm;
}

void FiniteModel::validate() const {
    if (n < 1 || eigenvalues.size() != n) fail(ErrorKind::invalid_argument, "FiniteModel: need n levels");
    if (k >= n) fail(ErrorKind::invalid_argument, "FiniteModel: initial index k out of range");
    if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end()))
        fail(ErrorKind::invalid_argument, "FiniteModel: eigenvalues must be sorted");
    params.validate();
}

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Eigen::MatrixXcd sample_gue(std::size_t n, std::mt19937_64& rng) {
    if (n < 1) fail(ErrorKind::invalid_argument, "sample_gue: n must be >= 1");
    std::normal_distribution<double> unit(0.0, 1.0);
    const double half = std::sqrt(0.5);
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd w(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        w(i, i) = unit(rng);
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double re = half * unit(rng);
            const double im = half * unit(rng);
            w(i, j) = cplx(re, im);
            w(j, i) = cplx(re, -im);
        }
    }
    return w;
}

Eigen::MatrixXcd assemble_h(const FiniteModel& fm, const Eigen::MatrixXcd& w) {
    const auto n = static_cast<Eigen::Index>(fm.n);
    if (w.rows() != n || w.cols() != n) fail(ErrorKind::invalid_argument, "assemble_h: w must be n x n");
    const double s = fm.params.s;
    const Eigen::MatrixXcd coupling = (fm.params.v / std::sqrt(static_cast<double>(fm.n))) * w;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        h(j, j) = fm.eigenvalues[j] + s;
        h(n + j, n + j) = fm.eigenvalues[j] - s;
    }
    h.topRightCorner(n, n) = coupling;
    h.bottomLeftCorner(n, n) = coupling;
    return h;
}

SampleEvolution::SampleEvolution(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        fail(ErrorKind::eigendecomposition_failure, "Hermitian eigendecomposition did not converge");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

Eigen::MatrixXcd SampleEvolution::propagator(double t) const {
    const Eigen::VectorXcd phase = (cplx(0.0, t) * values_.cast<cplx>()).array().exp();
    return vectors_ * phase.asDiagonal() * vectors_.adjoint();
}

Eigen::Matrix2cd SampleEvolution::reduced(const TwoLevelState& rho0, std::size_t k, double t) const {
    const auto n = static_cast<Eigen::Index>(this->n());
    const auto kk = static_cast<Eigen::Index>(k);
    // Columns c_b = exp(-itH) |b k> = V exp(-it Lambda) V^dagger e_{bk}.
    const Eigen::VectorXcd phase = (cplx(0.0, -t) * values_.cast<cplx>()).array().exp();
    Eigen::MatrixXcd y(2 * n, 2);
    y.col(0) = phase.cwiseProduct(vectors_.row(kk).adjoint());
    y.col(1) = phase.cwiseProduct(vectors_.row(n + kk).adjoint());
    const Eigen::MatrixXcd c = vectors_ * y;
    // rho_{ad} = tr(C_a rho0 C_d^dagger) = sum_{bg} rho0_{bg} <C_d[:, g], C_a[:, b]>.
    Eigen::Matrix2cd out;
    for (int a = 0; a < 2; ++a) {
        for (int d = 0; d < 2; ++d) {
            const Eigen::Matrix2cd overlap = c.middleRows(d * n, n).adjoint() * c.middleRows(a * n, n);
            // overlap(g, b) = sum_j conj(C_d(j, g)) C_a(j, b)
            cplx sum = 0.0;
            for (int b = 0; b < 2; ++b)
                for (int g = 0; g < 2; ++g) sum += rho0.matrix()(b, g) * overlap(g, b);
            out(a, d) = sum;
        }
    }
    return out;
}

Eigen::Matrix2cd SampleEvolution::reduced_mixture(const TwoLevelState& rho0, std::span<const double> weights,
                                                  double t) const {
    if (weights.size() != n()) fail(ErrorKind::invalid_argument, "mixture weights must have one entry per level");
    const double top = *std::max_element(weights.begin(), weights.end());
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (std::size_t k = 0; k < weights.size(); ++k)
        if (weights[k] > 1e-16 * top) out += weights[k] * reduced(rho0, k, t);
    return out;
}

const Eigen::Matrix<cplx, Eigen::Dynamic, 4>& SampleEvolution::block_weights() const {
    if (weights_.rows() == 0) {
        const auto n = static_cast<Eigen::Index>(this->n());
        const auto& top = vectors_.topRows(n);
        const auto& bottom = vectors_.bottomRows(n);
        weights_.resize(2 * n, 4);
        weights_.col(0) = top.cwiseAbs2().colwise().sum().transpose().cast<cplx>();
        weights_.col(1) = top.cwiseProduct(bottom.conjugate()).colwise().sum().transpose();
        weights_.col(2) = weights_.col(1).conjugate();
        weights_.col(3) = bottom.cwiseAbs2().colwise().sum().transpose().cast<cplx>();
    }
    return weights_;
}

Eigen::Matrix2cd SampleEvolution::resolvent_trace(cplx z) const {
    if (z.imag() == 0.0) fail(ErrorKind::real_axis_evaluation, "resolvent_trace needs Im z != 0");
    const auto& bw = block_weights();
    const Eigen::VectorXcd r = (values_.cast<cplx>().array() - z).inverse();
    const Eigen::Matrix<cplx, 1, 4> g = r.transpose() * bw / static_cast<double>(n());
    Eigen::Matrix2cd out;
    out << g(0), g(1), g(2), g(3);
    return out;
}

TwoLevelState reduced_density(const FiniteModel& fm, const Eigen::MatrixXcd& w, const TwoLevelState& rho0,
                              double t) {
    fm.validate();
    const SampleEvolution ev(assemble_h(fm, w));
    const Eigen::Matrix2cd r = ev.reduced(rho0, fm.k, t);
    check_density(r, t);
    return TwoLevelState(r);
}

EnsembleStats ensemble_run(const FiniteModel& fm, const TwoLevelState& rho0, std::span<const double> times,
                           std::size_t M, std::span<const double> weights) {
    fm.validate();
    if (M < 2) fail(ErrorKind::invalid_argument, "ensemble_run needs at least 2 samples");
    const std::size_t T = times.size();
    std::vector<Eigen::Matrix2cd> mean(T, Eigen::Matrix2cd::Zero());
    std::vector<Eigen::Matrix2d> m2(T, Eigen::Matrix2d::Zero());
    for (std::size_t i = 0; i < M; ++i) {
        std::mt19937_64 rng(sample_seed(fm.seed, i));
        const SampleEvolution ev(assemble_h(fm, sample_gue(fm.n, rng)));
        const double count = static_cast<double>(i + 1);
        for (std::size_t k = 0; k < T; ++k) {
            const Eigen::Matrix2cd r =
                weights.empty() ? ev.reduced(rho0, fm.k, times[k]) : ev.reduced_mixture(rho0, weights, times[k]);
            check_density(r, times[k]);
            // Welford update, per entry.
            const Eigen::Matrix2cd delta = r - mean[k];
            mean[k] += delta / count;
            m2[k] += (delta.conjugate().cwiseProduct(r - mean[k])).real();
        }
    }
    EnsembleStats out;
    out.times.assign(times.begin(), times.end());
    out.samples = M;
    for (std::size_t k = 0; k < T; ++k) {
        out.mean.emplace_back(mean[k]);
        out.variance.push_back(m2[k] / static_cast<double>(M - 1));
    }
    return out;
}

MatrixHistogram empirical_measure(const SampleEvolution& ev, std::span<const double> edges) {
    if (edges.size() < 2) fail(ErrorKind::invalid_argument, "need at least two bin edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) fail(ErrorKind::non_monotone_grid, "bin edges must increase");
    const Eigen::VectorXd& lam = ev.eigenvalues();
    if (lam.minCoeff() < edges.front() || lam.maxCoeff() > edges.back()) {
        std::ostringstream os;
        os << "spectrum [" << lam.minCoeff() << ", " << lam.maxCoeff() << "] exceeds the bins [" << edges.front()
           << ", " << edges.back() << "]";
        fail(ErrorKind::spectrum_out_of_range, os.str());
    }
    MatrixHistogram h;
    h.edges.assign(edges.begin(), edges.end());
    for (auto& m : h.mass) m.assign(edges.size() - 1, 0.0);
    const auto& bw = ev.block_weights();
    const double inv_n = 1.0 / static_cast<double>(ev.n());
    for (Eigen::Index l = 0; l < lam.size(); ++l) {
        auto it = std::upper_bound(edges.begin(), edges.end(), lam(l));
        std::size_t bin = static_cast<std::size_t>(it - edges.begin());
        bin = std::clamp<std::size_t>(bin, 1, edges.size() - 1) - 1;
        for (int e = 0; e < 4; ++e) h.mass[e][bin] += bw(l, e) * inv_n;
    }
    return h;
}

MatrixHistogram empirical_measure(const FiniteModel& fm, const Eigen::MatrixXcd& w, std::span<const double> edges) {
    fm.validate();
    return empirical_measure(SampleEvolution(assemble_h(fm, w)), edges);
}

Eigen::Matrix2cd resolvent_trace(const FiniteModel& fm, const Eigen::MatrixXcd& w, cplx z) {
    fm.validate();
    return SampleEvolution(assemble_h(fm, w)).resolvent_trace(z);
}

std::vector<double> canonical_initial_weights(const FiniteModel& fm, double beta) {
    if (std::isnan(beta)) fail(ErrorKind::invalid_argument, "beta must be a number");
    std::vector<double> logw(fm.eigenvalues.size());
    for (std::size_t j = 0; j < logw.size(); ++j) {
        // beta = +-inf with E = 0 would give nan; treat that level as neutral.
        logw[j] = fm.eigenvalues[j] == 0.0 ? 0.0 : -beta * fm.eigenvalues[j];
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(top)) {
        // Infinite beta: point mass on the extremal levels.
        std::vector<double> out(logw.size(), 0.0);
        std::size_t count = 0;
        for (std::size_t j = 0; j < logw.size(); ++j)
            if (logw[j] == top) ++count;
        for (std::size_t j = 0; j < logw.size(); ++j)
            if (logw[j] == top) out[j] = 1.0 / count;
        return out;
    }
    std::vector<double> out(logw.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < logw.size(); ++j) sum += out[j] = std::exp(logw[j] - top);
    if (!std::isfinite(sum) || !(sum > 0.0)) fail(ErrorKind::tail_overflow, "canonical weights overflow");
    for (double& x : out) x /= sum;
    return out;
}

}  // namespace rmrelax
