//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "reachcert/classifier.hpp"
#include "reachcert/linalg.hpp"
#include "reachcert/system_model.hpp"

namespace reachcert::testing {

inline Matrix rotation(double t) {
    Matrix r(2, 2);
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}

inline Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

/// Random matrix rescaled to spectral radius rho.
inline Matrix random_with_radius(int n, double rho, std::mt19937_64& rng) {
    Matrix a = gaussian_matrix(n, n, rng);
    return a * (rho / linalg::spectral_radius(a));
}

/// Orthogonal times a diagonal in [0.5, 2].
inline Matrix random_similarity(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ud(0.5, 2.0);
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n, rng));
    Matrix q = qr.householderQ();
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = ud(rng);
    return q * d.asDiagonal();
}

inline NoiseModel gaussian_identity(int m) { return NoiseModel::gaussian(Matrix::Identity(m, m)); }

inline NoiseModel uniform_unit(int m) { return NoiseModel::uniform_box(Vector::Ones(m)); }

inline TargetBall unit_ball(int n, double radius = 1.0) {
    return make_target(Vector::Zero(n), radius);
}

struct RegressionCase {
    std::string name;
    LinearSystem system;
    Outcome expected;
    CertificateAdvice advice;
};

/// The nine named systems with their expected verdicts.
inline std::vector<RegressionCase> regression_matrix() {
    std::mt19937_64 rng(20261018);
    std::vector<RegressionCase> out;
    Matrix shear(2, 2);
    shear << 1, 1, 0, 1;
    Matrix b11(2, 1);
    b11 << 1, 1;
    Matrix diag110 = Vector::Ones(3).asDiagonal();
    diag110(2, 2) = 0.0;
    Matrix diag1half = Matrix::Identity(2, 2);
    diag1half(1, 1) = 0.5;
    out.push_back({"stable random", make_linear_system(random_with_radius(3, 0.9, rng),
                                                       Matrix::Identity(3, 3), gaussian_identity(3)),
                   Outcome::ReachableStable, CertificateAdvice::Quadratic});
    out.push_back({"scalar rho=2", make_linear_system(Matrix::Constant(1, 1, 2.0),
                                                      Matrix::Ones(1, 1), uniform_unit(1)),
                   Outcome::NotReachableUnstable, CertificateAdvice::None});
    out.push_back({"shear", make_linear_system(shear, Matrix::Identity(2, 2), gaussian_identity(2)),
                   Outcome::NotReachableJordan, CertificateAdvice::None});
    out.push_back({"identity 3", make_linear_system(Matrix::Identity(3, 3), Matrix::Identity(3, 3),
                                                    gaussian_identity(3)),
                   Outcome::NotReachableDimension, CertificateAdvice::None});
    out.push_back({"random walk", make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                                                     uniform_unit(1)),
                   Outcome::ReachableCritical, CertificateAdvice::Logarithmic});
    out.push_back({"rotation", make_linear_system(rotation(M_PI / 4), Matrix::Identity(2, 2),
                                                  gaussian_identity(2)),
                   Outcome::ReachableCritical, CertificateAdvice::Logarithmic});
    out.push_back({"diag(1,0.5)", make_linear_system(diag1half, Matrix::Identity(2, 2),
                                                     gaussian_identity(2)),
                   Outcome::ReachableCritical, CertificateAdvice::Composite});
    out.push_back({"B=[1,1]^T", make_linear_system(Matrix::Identity(2, 2), b11, gaussian_identity(1)),
                   Outcome::InconclusiveAssumption, CertificateAdvice::None});
    out.push_back({"diag(1,1,0) noise", make_linear_system(Matrix::Identity(3, 3), diag110,
                                                           gaussian_identity(3)),
                   Outcome::InconclusiveAssumption, CertificateAdvice::None});
    return out;
}

}  // namespace reachcert::testing
