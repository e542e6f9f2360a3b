#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rangewave {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Largest elementwise deviation |M - M^H|.
double hermitian_deviation(const CMat& m);

bool is_hermitian(const CMat& m, double tol = 1e-12);

/// (M + M^H)/2, scrubbing round-off from products that are Hermitian in exact
/// arithmetic.
CMat symmetrize(const CMat& m);

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
    RVec values;
    CMat vectors;
};

HermitianEigen hermitian_eig(const CMat& m);

/// Hermitian PSD square root. Eigenvalues below -clampRelTol * max(|eig|)
/// are rejected, small negatives are clamped to zero before the root.
CMat hermitian_sqrt(const CMat& m, double clampRelTol = 1e-10);

/// log det of a Hermitian positive definite matrix via Cholesky.
/// Throws std::domain_error if the matrix is not PD.
double logdet_hpd(const CMat& m);

/// Spectral condition number max|eig| / min|eig| of a Hermitian matrix.
double hermitian_condition(const CMat& m);

}  // namespace rangewave
