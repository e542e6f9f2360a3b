#include "rangewave/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace rangewave {

double hermitian_deviation(const CMat& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& m, double tol) {
    return m.rows() == m.cols() && hermitian_deviation(m) <= tol;
}

CMat symmetrize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

HermitianEigen hermitian_eig(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<CMat> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigendecomposition failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CMat hermitian_sqrt(const CMat& m, double clampRelTol) {
    HermitianEigen eig = hermitian_eig(symmetrize(m));
    const double scale = eig.values.cwiseAbs().maxCoeff();
    RVec roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double v = eig.values[i];
        if (v < -clampRelTol * std::max(scale, 1.0)) {
            throw std::domain_error("hermitian_sqrt: matrix is not PSD");
        }
        roots[i] = std::sqrt(std::max(v, 0.0));
    }
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

double logdet_hpd(const CMat& m) {
    Eigen::LLT<CMat> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("logdet_hpd: matrix is not positive definite");
    }
    double sum = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        sum += std::log(l(i, i).real());
    }
    return 2.0 * sum;
}

double hermitian_condition(const CMat& m) {
    RVec values = hermitian_eig(m).values.cwiseAbs();
    double lo = values.minCoeff();
    double hi = values.maxCoeff();
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace rangewave
