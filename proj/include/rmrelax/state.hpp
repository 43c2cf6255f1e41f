#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rmrelax {

using cplx = std::complex<double>;

// Row/column of the level alpha = +1 / -1 in a 2x2 matrix.
constexpr int level(int alpha) { return alpha > 0 ? 0 : 1; }

/// 2x2 density matrix of the two-level system, ordered (+, -).
class TwoLevelState {
public:
    TwoLevelState() { rho_ << 1, 0, 0, 0; }
    explicit TwoLevelState(const Eigen::Matrix2cd& rho) : rho_(rho) {}

    static TwoLevelState diagonal(double plus, double minus);

    /// Throws validation_error (eigenvalues in the message) unless rho is
    /// Hermitian and of unit trace within tol and has eigenvalues >= -psd_tol.
    static TwoLevelState validated(const Eigen::Matrix2cd& rho, double tol = 1e-12,
                                   double psd_tol = 1e-10);

    cplx operator()(int alpha, int delta) const { return rho_(level(alpha), level(delta)); }
    cplx& operator()(int alpha, int delta) { return rho_(level(alpha), level(delta)); }

    const Eigen::Matrix2cd& matrix() const { return rho_; }

    double trace_error() const { return std::abs(rho_.trace() - 1.0); }
    double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
    /// Eigenvalues of the Hermitian part, ascending.
    Eigen::Vector2d eigenvalues() const;

private:
    Eigen::Matrix2cd rho_;
};

}  // namespace rmrelax
