#include "rmrelax/state.hpp"

#include <sstream>

#include "rmrelax/error.hpp"

namespace rmrelax {

TwoLevelState TwoLevelState::diagonal(double plus, double minus) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = plus;
    m(1, 1) = minus;
    return TwoLevelState(m);
}

Eigen::Vector2d TwoLevelState::eigenvalues() const {
    const Eigen::Matrix2cd h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

TwoLevelState TwoLevelState::validated(const Eigen::Matrix2cd& rho, double tol, double psd_tol) {
    TwoLevelState st(rho);
    if (!rho.allFinite()) fail(ErrorKind::validation_error, "rho0 has non-finite entries");
    if (st.hermiticity_error() > tol) {
        std::ostringstream os;
        os << "rho0 is not Hermitian (deviation " << st.hermiticity_error() << ")";
        fail(ErrorKind::validation_error, os.str());
    }
    if (st.trace_error() > tol) {
        std::ostringstream os;
        os << "rho0 trace is " << rho.trace().real() << ", expected 1";
        fail(ErrorKind::validation_error, os.str());
    }
    const Eigen::Vector2d ev = st.eigenvalues();
    if (ev(0) < -psd_tol) {
        std::ostringstream os;
        os << "rho0 is not positive semidefinite: eigenvalues " << ev(0) << ", " << ev(1);
        fail(ErrorKind::validation_error, os.str());
    }
    return st;
}

}  // namespace rmrelax
