//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace reachcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

namespace linalg {

inline constexpr double kDefaultClusterTol = 1e-8;
inline constexpr double kDefaultRankTol = 1e-10;

struct EigenCluster {
    Complex value;
    int multiplicity = 0;
};

/// Eigenvalues of a real matrix grouped into clusters. Non-real clusters are
/// stored so that the conjugate of every entry is also present, with
/// identical multiplicity and bit-exact conjugate value.
struct ComplexSpectrum {
    std::vector<EigenCluster> clusters;

    int total_multiplicity() const;
    double max_modulus() const;
};

bool all_finite(const Matrix& m);
void require_finite(const Matrix& m, const char* what);
void require_square(const Matrix& m, const char* what);

/// Raw eigenvalues of a real square matrix, exactly conjugate-symmetric.
std::vector<Complex> raw_eigenvalues(const Matrix& m);

/// Single-linkage clustering of eigenvalues at complex distance cluster_tol.
ComplexSpectrum cluster_eigenvalues(const std::vector<Complex>& raw,
                                    double cluster_tol);

ComplexSpectrum eigen_decompose(const Matrix& m,
                                double cluster_tol = kDefaultClusterTol);

double spectral_radius(const Matrix& m);

/// Solves Q - A^T Q A = I through the vectorized n^2 x n^2 system, then
/// symmetrizes. Throws when rho(A) is not safely below one, when the
/// residual bound fails, or when Q is not positive definite.
Matrix solve_discrete_lyapunov(const Matrix& a, double unit_tol = 1e-9);

/// Frobenius residual ||A^T Q A - Q + I||_F.
double lyapunov_residual(const Matrix& a, const Matrix& q);

/// Singular values strictly above rank_tol * sigma_max.
int numerical_rank(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Same count for complex input, with an explicit absolute scale:
/// singular values above rank_tol * scale are counted.
int numerical_rank_scaled(const ComplexMatrix& m, double rank_tol, double scale);

double weighted_norm(const Vector& x, const Matrix& q);

bool is_symmetric(const Matrix& m, double tol = 1e-12);
bool is_positive_definite(const Matrix& m);
double min_eigenvalue_sym(const Matrix& m);
double max_eigenvalue_sym(const Matrix& m);

/// Largest eigenvalue of the pencil (lhs, rhs) with rhs symmetric PD, i.e.
/// lambda_max(rhs^{-1} lhs) for symmetric lhs.
double max_generalized_eigenvalue(const Matrix& lhs, const Matrix& rhs);

/// Symmetric PD square root.
Matrix sqrt_spd(const Matrix& m);

}  // namespace linalg
}  // namespace reachcert
