#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rmrelax/selfconsistent.hpp"
#include "rmrelax/state.hpp"

namespace rmrelax {

/// A realized composite model: reservoir levels E_j, parameters, initial index k.
/// Basis ordering of the 2n-dimensional space: (+, j) -> j, (-, j) -> n + j.
struct FiniteModel {
    std::size_t n = 0;
    std::vector<double> eigenvalues;  // sorted
    ModelParams params;
    std::size_t k = 0;                // zero-based initial reservoir index
    std::uint64_t seed = 0;

    /// Quantile levels of params.measure, k = level nearest to E.
    static FiniteModel build(const ModelParams& params, std::size_t n, double E, std::uint64_t seed);
    void validate() const;
};

/// Deterministic per-sample seed derived from the base seed and the sample index.
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index);

/// Hermitian w with real N(0, 1) diagonal and N(0, 1/2) real/imaginary parts off it.
Eigen::MatrixXcd sample_gue(std::size_t n, std::mt19937_64& rng);

/// H = s sigma_z (x) 1 + 1 (x) h + v sigma_x (x) w / sqrt(n).
Eigen::MatrixXcd assemble_h(const FiniteModel& fm, const Eigen::MatrixXcd& w);

/// Eigendecomposition of one composite Hamiltonian, reused across times.
class SampleEvolution {
public:
    explicit SampleEvolution(const Eigen::MatrixXcd& h);

    std::size_t n() const { return static_cast<std::size_t>(values_.size()) / 2; }
    const Eigen::VectorXd& eigenvalues() const { return values_; }
    const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

    /// U(t) = exp(itH).
    Eigen::MatrixXcd propagator(double t) const;

    /// Partial trace over the reservoir of U(-t) (rho0 (x) P_k) U(t).
    Eigen::Matrix2cd reduced(const TwoLevelState& rho0, std::size_t k, double t) const;

    /// sum_k weight_k * reduced(rho0, k, t).
    Eigen::Matrix2cd reduced_mixture(const TwoLevelState& rho0, std::span<const double> weights,
                                     double t) const;

    /// g_{ag}(z) = n^{-1} sum_j (H - z)^{-1}_{aj, gj}.
    Eigen::Matrix2cd resolvent_trace(cplx z) const;

    /// Per eigenvector l: sum_j V(aj, l) conj(V(gj, l)), entries (++, +-, -+, --).
    const Eigen::Matrix<cplx, Eigen::Dynamic, 4>& block_weights() const;

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXcd vectors_;
    mutable Eigen::Matrix<cplx, Eigen::Dynamic, 4> weights_;
};

/// Exact reduced density matrix of one sample at time t.
TwoLevelState reduced_density(const FiniteModel& fm, const Eigen::MatrixXcd& w, const TwoLevelState& rho0,
                              double t);

struct EnsembleStats {
    std::vector<double> times;
    std::vector<TwoLevelState> mean;
    std::vector<Eigen::Matrix2d> variance;  // unbiased E|x - mean|^2 per entry
    std::size_t samples = 0;
};

/// M independent draws of w; sample i uses the stream seeded by sample_seed(fm.seed, i).
/// With weights (one per reservoir level) the initial state is the mixture sum_k weight_k P_k.
EnsembleStats ensemble_run(const FiniteModel& fm, const TwoLevelState& rho0, std::span<const double> times,
                           std::size_t M, std::span<const double> weights = {});

/// n^{-1} sum_j chi_bin(H)_{aj, gj} for each bin of a partition.
struct MatrixHistogram {
    std::vector<double> edges;
    std::array<std::vector<cplx>, 4> mass;  // (++, +-, -+, --)

    const std::vector<cplx>& operator()(int alpha, int gamma) const {
        return mass[2 * level(alpha) + level(gamma)];
    }
};

MatrixHistogram empirical_measure(const FiniteModel& fm, const Eigen::MatrixXcd& w,
                                  std::span<const double> edges);
MatrixHistogram empirical_measure(const SampleEvolution& ev, std::span<const double> edges);

Eigen::Matrix2cd resolvent_trace(const FiniteModel& fm, const Eigen::MatrixXcd& w, cplx z);

/// exp(-beta E_k) / sum_j exp(-beta E_j), evaluated with a max shift.
std::vector<double> canonical_initial_weights(const FiniteModel& fm, double beta);

}  // namespace rmrelax
