//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "reachcert/error.hpp"

namespace reachcert {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::NonFinite: return "non-finite";
        case ErrorCode::NonConvergence: return "non-convergence";
        case ErrorCode::IllConditioned: return "ill-conditioned";
        case ErrorCode::Precondition: return "precondition";
        case ErrorCode::Schema: return "schema";
        case ErrorCode::NoCertificate: return "no-certificate";
        case ErrorCode::InsufficientData: return "insufficient-data";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

namespace linalg {

int ComplexSpectrum::total_multiplicity() const {
    int total = 0;
    for (const auto& c : clusters) total += c.multiplicity;
    return total;
}

double ComplexSpectrum::max_modulus() const {
    double rho = 0.0;
    for (const auto& c : clusters) rho = std::max(rho, std::abs(c.value));
    return rho;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
    require(m.allFinite(), ErrorCode::NonFinite,
            std::string(what) + ": entries must be finite");
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows()
           << "x" << m.cols();
        fail(ErrorCode::DimensionMismatch, os.str());
    }
}

std::vector<Complex> raw_eigenvalues(const Matrix& m) {
    require_square(m, "eigen_decompose");
    require_finite(m, "eigen_decompose");
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::NonConvergence,
             "eigen_decompose: real Schur iteration did not converge");
    }
    std::vector<Complex> out(solver.eigenvalues().begin(),
                             solver.eigenvalues().end());
    // Eigen emits 2x2 Schur blocks as exact (p, +z), (p, -z) pairs; enforce it
    // anyway so downstream pairing never depends on that detail.
    for (auto& v : out) {
        if (v.imag() < 0.0) continue;
        if (v.imag() == 0.0) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const Complex& o) {
            return o.imag() < 0.0 && std::abs(o - std::conj(v)) <= 1e-12 * (1.0 + std::abs(v));
        });
        if (it != out.end()) *it = std::conj(v);
    }
    return out;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

bool cluster_order(const EigenCluster& a, const EigenCluster& b) {
    double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
}

}  // namespace

ComplexSpectrum cluster_eigenvalues(const std::vector<Complex>& raw,
                                    double cluster_tol) {
    require(cluster_tol > 0.0, ErrorCode::InvalidArgument,
            "cluster_tol must be positive");
    const int n = static_cast<int>(raw.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(raw[i] - raw[j]) <= cluster_tol) {
                parent[find_root(parent, i)] = find_root(parent, j);
            }
        }
    }

    std::vector<Complex> sum(n, Complex{});
    std::vector<int> count(n, 0);
    for (int i = 0; i < n; ++i) {
        int r = find_root(parent, i);
        sum[r] += raw[i];
        ++count[r];
    }

    ComplexSpectrum spec;
    for (int r = 0; r < n; ++r) {
        if (count[r] == 0) continue;
        Complex mean = sum[r] / static_cast<double>(count[r]);
        if (std::abs(mean.imag()) <= cluster_tol) {
            spec.clusters.push_back({Complex(mean.real(), 0.0), count[r]});
        } else if (mean.imag() > 0.0) {
            spec.clusters.push_back({mean, count[r]});
            spec.clusters.push_back({std::conj(mean), count[r]});
        }
    }
    if (spec.total_multiplicity() != n) {
        fail(ErrorCode::NonConvergence,
             "eigen_decompose: clustered spectrum lost conjugate symmetry");
    }
    std::sort(spec.clusters.begin(), spec.clusters.end(), cluster_order);
    return spec;
}

ComplexSpectrum eigen_decompose(const Matrix& m, double cluster_tol) {
    return cluster_eigenvalues(raw_eigenvalues(m), cluster_tol);
}

double spectral_radius(const Matrix& m) {
    return eigen_decompose(m).max_modulus();
}

double lyapunov_residual(const Matrix& a, const Matrix& q) {
    const Matrix r = a.transpose() * q * a - q + Matrix::Identity(q.rows(), q.cols());
    return r.norm();
}

Matrix solve_discrete_lyapunov(const Matrix& a, double unit_tol) {
    require_square(a, "solve_discrete_lyapunov");
    require_finite(a, "solve_discrete_lyapunov");
    const double rho = spectral_radius(a);
    if (!(rho < 1.0 - unit_tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "solve_discrete_lyapunov: spectral radius " << rho
           << " is not below 1 - " << unit_tol;
        fail(ErrorCode::Precondition, os.str());
    }

    const Eigen::Index n = a.rows();
    const Eigen::Index nn = n * n;
    const Matrix at = a.transpose();
    // vec(A^T Q A) = (A^T kron A^T) vec(Q) in column-major vectorization.
    Matrix k = Matrix::Identity(nn, nn);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            k.block(i * n, j * n, n, n) -= at(i, j) * at;
        }
    }
    Vector rhs = Matrix::Identity(n, n).reshaped();
    Eigen::FullPivLU<Matrix> lu(k);
    Vector sol = lu.solve(rhs);
    sol += lu.solve(rhs - k * sol);  // one refinement pass

    Matrix q = sol.reshaped(n, n);
    q = 0.5 * (q + q.transpose()).eval();
    require(q.allFinite(), ErrorCode::IllConditioned,
            "solve_discrete_lyapunov: solution is not finite");

    const double residual = lyapunov_residual(a, q);
    if (residual > 1e-9 * (1.0 + q.norm())) {
        std::ostringstream os;
        os.precision(6);
        os << "solve_discrete_lyapunov: residual " << residual
           << " exceeds bound; rho(A) = " << rho << ", ||Q||_F = " << q.norm()
           << ", cond(K) ~ " << 1.0 / lu.rcond();
        fail(ErrorCode::IllConditioned, os.str());
    }
    if (!is_positive_definite(q)) {
        fail(ErrorCode::IllConditioned,
             "solve_discrete_lyapunov: Q is not positive definite");
    }
    return q;
}

int numerical_rank(const Matrix& m, double rank_tol) {
    require_finite(m, "numerical_rank");
    require(rank_tol > 0.0, ErrorCode::InvalidArgument, "rank_tol must be positive");
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = rank_tol * s(0);
    return static_cast<int>((s.array() > cut).count());
}

int numerical_rank_scaled(const ComplexMatrix& m, double rank_tol, double scale) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const double cut = rank_tol * scale;
    return static_cast<int>((svd.singularValues().array() > cut).count());
}

double weighted_norm(const Vector& x, const Matrix& q) {
    if (q.rows() != x.size() || q.cols() != x.size()) {
        fail(ErrorCode::DimensionMismatch, "weighted_norm: dimension mismatch");
    }
    const double v = x.dot(q * x);
    return std::sqrt(std::max(v, 0.0));
}

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + m.cwiseAbs().maxCoeff());
}

bool is_positive_definite(const Matrix& m) {
    if (m.rows() != m.cols() || m.size() == 0 || !m.allFinite()) return false;
    if (!is_symmetric(m, 1e-10)) return false;
    Eigen::LLT<Matrix> llt(0.5 * (m + m.transpose()));
    if (llt.info() != Eigen::Success) return false;
    return min_eigenvalue_sym(m) > 0.0;
}

double min_eigenvalue_sym(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue_sym(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double max_generalized_eigenvalue(const Matrix& lhs, const Matrix& rhs) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(
        0.5 * (lhs + lhs.transpose()), 0.5 * (rhs + rhs.transpose()),
        Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) {
        fail(ErrorCode::NonConvergence, "generalized eigenproblem failed");
    }
    return es.eigenvalues().maxCoeff();
}

Matrix sqrt_spd(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    return es.operatorSqrt();
}

}  // namespace linalg
}  // namespace reachcert
