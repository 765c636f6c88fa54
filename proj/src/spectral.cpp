//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "reachcert/error.hpp"

namespace reachcert {

namespace {

double operator_norm(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

ComplexMatrix shifted(const Matrix& a, Complex mu) {
    ComplexMatrix m = a.cast<Complex>();
    m.diagonal().array() -= mu;
    return m;
}

/// rank((A - mu I)^k) for k = 0..kmax, with absolute thresholds rank_tol * s^k.
std::vector<int> rank_sequence(const Matrix& a, Complex mu, int kmax, double rank_tol,
                               double scale) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> ranks{n};
    const ComplexMatrix m = shifted(a, mu);
    ComplexMatrix power = m;
    const double s = scale + std::abs(mu);
    for (int k = 1; k <= kmax; ++k) {
        ranks.push_back(linalg::numerical_rank_scaled(power, rank_tol, std::pow(s, k)));
        power = (power * m).eval();
    }
    return ranks;
}

bool is_real(Complex v) { return v.imag() == 0.0; }

struct MergeCandidate {
    std::size_t i, j;
    double distance;
};

/// Merges clusters that only differ by rounding of a defective eigenvalue.
int merge_defective_clusters(const Matrix& a, std::vector<linalg::EigenCluster>& cl,
                             const SpectralTolerances& tol, double scale) {
    const int n = static_cast<int>(a.rows());
    const double radius = 1e-3 * std::max(1.0, scale);
    int merges = 0;
    for (;;) {
        std::vector<MergeCandidate> cands;
        for (std::size_t i = 0; i < cl.size(); ++i) {
            for (std::size_t j = i + 1; j < cl.size(); ++j) {
                const Complex vi = cl[i].value, vj = cl[j].value;
                const bool both_real = is_real(vi) && is_real(vj);
                const bool both_upper = vi.imag() > 0.0 && vj.imag() > 0.0;
                const bool conj_pair = !is_real(vi) && vj == std::conj(vi);
                if (!(both_real || both_upper || conj_pair)) continue;
                const double dist = std::abs(vi - vj);
                if (dist <= radius) cands.push_back({i, j, dist});
            }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const auto& x, const auto& y) { return x.distance < y.distance; });

        bool merged = false;
        for (const auto& c : cands) {
            const auto ci = cl[c.i], cj = cl[c.j];
            const bool conj_pair = !is_real(ci.value) && cj.value == std::conj(ci.value);
            const int mult = ci.multiplicity + cj.multiplicity;
            Complex mu = conj_pair
                             ? Complex(ci.value.real(), 0.0)
                             : (static_cast<double>(ci.multiplicity) * ci.value +
                                static_cast<double>(cj.multiplicity) * cj.value) /
                                   static_cast<double>(mult);
            const auto ranks = rank_sequence(a, mu, mult, tol.rank_tol, scale);
            if (n - ranks.back() < mult) continue;

            std::vector<linalg::EigenCluster> next;
            for (std::size_t k = 0; k < cl.size(); ++k) {
                if (k == c.i || k == c.j) continue;
                // An upper-half merge takes its conjugate mirrors with it.
                if (!conj_pair && !is_real(ci.value) &&
                    (cl[k].value == std::conj(ci.value) || cl[k].value == std::conj(cj.value))) {
                    continue;
                }
                next.push_back(cl[k]);
            }
            next.push_back({mu, mult});
            if (!conj_pair && !is_real(mu)) next.push_back({std::conj(mu), mult});
            cl = std::move(next);
            ++merges;
            merged = true;
            break;
        }
        if (!merged) break;
    }
    std::sort(cl.begin(), cl.end(), [](const auto& x, const auto& y) {
        double mx = std::abs(x.value), my = std::abs(y.value);
        if (mx != my) return mx > my;
        if (x.value.real() != y.value.real()) return x.value.real() > y.value.real();
        return x.value.imag() > y.value.imag();
    });
    return merges;
}

/// Orthonormal basis of ker(m) with the given dimension, from the trailing
/// right singular vectors.
ComplexMatrix null_space(const ComplexMatrix& m, int dim) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

Matrix real_null_space(const Matrix& m, int dim) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

void normalize_sign(Eigen::Ref<Vector> v) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0.0) v = -v;
}

Matrix normalized_weight(const Matrix& p) {
    Matrix q = (p * p.transpose()).inverse();
    q = 0.5 * (q + q.transpose()).eval();
    q /= linalg::max_eigenvalue_sym(q);
    return q;
}

}  // namespace

SpectralReport analyze(const Matrix& a, const SpectralTolerances& tol) {
    linalg::require_square(a, "analyze");
    linalg::require_finite(a, "analyze");
    require(tol.unit_tol > 0.0 && tol.rank_tol > 0.0 && tol.cluster_tol > 0.0,
            ErrorCode::InvalidArgument, "analyze: tolerances must be positive");

    SpectralReport rep;
    rep.n = static_cast<int>(a.rows());
    rep.unit_tol = tol.unit_tol;

    auto spectrum = linalg::eigen_decompose(a, tol.cluster_tol);
    const double scale = operator_norm(a);
    rep.merged_clusters = merge_defective_clusters(a, spectrum.clusters, tol, scale);
    if (rep.merged_clusters > 0) {
        std::ostringstream os;
        os << "merged " << rep.merged_clusters
           << " pair(s) of nearby eigenvalue clusters passing the algebraic-multiplicity test";
        rep.notes.push_back(os.str());
    }

    for (std::size_t i = 0; i < spectrum.clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < spectrum.clusters.size(); ++j) {
            if (std::abs(spectrum.clusters[i].value - spectrum.clusters[j].value) <
                10.0 * tol.cluster_tol) {
                rep.ambiguous_clustering = true;
            }
        }
    }
    if (rep.ambiguous_clustering) {
        rep.notes.push_back("ambiguous clustering: two clusters closer than 10*cluster_tol");
    }

    for (const auto& c : spectrum.clusters) {
        ClusterStructure s;
        s.value = c.value;
        s.algebraic = c.multiplicity;
        const double modulus = std::abs(c.value);
        s.unit = std::abs(modulus - 1.0) <= tol.unit_tol;
        const auto ranks = rank_sequence(a, c.value, c.multiplicity + 1, tol.rank_tol, scale);
        s.geometric = rep.n - ranks[1];
        s.block_size = c.multiplicity;
        for (int k = 1; k + 1 < static_cast<int>(ranks.size()); ++k) {
            if (ranks[k] == ranks[k + 1]) {
                s.block_size = k;
                break;
            }
        }
        const int kernel_dim = rep.n - ranks[s.block_size];
        if (kernel_dim != s.algebraic) {
            std::ostringstream os;
            os.precision(12);
            os << "cluster " << c.value << ": generalized kernel dimension " << kernel_dim
               << " differs from cluster size " << s.algebraic;
            rep.notes.push_back(os.str());
        }
        s.geometric = std::clamp(s.geometric, 1, s.algebraic);

        rep.rho = std::max(rep.rho, modulus);
        if (s.unit) {
            rep.unit_eigs.push_back(s);
            rep.dim_ea += s.algebraic;
            rep.d_max_unit = std::max(rep.d_max_unit, s.block_size);
        } else {
            rep.stable_part_rho = std::max(rep.stable_part_rho, modulus);
        }
        rep.clusters.push_back(s);
    }
    return rep;
}

RealPlaneBasis unit_plane_basis(const Matrix& a, const SpectralReport& report) {
    const int n = static_cast<int>(a.rows());
    if (!(report.n == n && report.dim_ea == n && (n == 1 || n == 2) && report.d_max_unit == 1)) {
        fail(ErrorCode::Precondition,
             "unit_plane_basis: needs dim(E_A) = n in {1,2} with simple Jordan blocks");
    }
    RealPlaneBasis out;
    if (n == 1) {
        out.p = Matrix::Identity(1, 1);
        out.q_star = Matrix::Identity(1, 1);
        return out;
    }

    const auto& eigs = report.unit_eigs;
    const bool complex_pair = std::any_of(eigs.begin(), eigs.end(),
                                          [](const auto& c) { return c.value.imag() != 0.0; });
    if (complex_pair) {
        const auto upper = *std::find_if(eigs.begin(), eigs.end(),
                                         [](const auto& c) { return c.value.imag() > 0.0; });
        // A (Re v + i Im v) = (a + i b) v  gives  A [Re v, Im v] = [Re v, Im v] [[a, b], [-b, a]].
        const ComplexMatrix v = null_space(shifted(a, upper.value), 1);
        out.p.resize(2, 2);
        out.p.col(0) = v.col(0).real();
        out.p.col(1) = v.col(0).imag();
    } else {
        out.p.resize(2, 2);
        int col = 0;
        for (const auto& c : eigs) {
            Matrix shifted_real = a;
            shifted_real.diagonal().array() -= c.value.real();
            const Matrix ns = real_null_space(shifted_real, c.algebraic);
            for (int k = 0; k < c.algebraic; ++k) {
                out.p.col(col) = ns.col(k);
                normalize_sign(out.p.col(col));
                ++col;
            }
        }
    }
    const double det = std::abs(out.p.determinant());
    if (!(det > 1e-10 * out.p.squaredNorm())) {
        fail(ErrorCode::IllConditioned, "unit_plane_basis: eigenvector basis is degenerate");
    }
    out.q_star = normalized_weight(out.p);
    const Matrix defect = a.transpose() * out.q_star * a - out.q_star;
    if (defect.norm() > 1e-8 * (1.0 + out.q_star.norm())) {
        std::ostringstream os;
        os << "unit_plane_basis: ||A^T Q* A - Q*||_F = " << defect.norm()
           << " exceeds tolerance";
        fail(ErrorCode::IllConditioned, os.str());
    }
    return out;
}

Matrix InvariantSplit::unit_projector() const {
    Matrix sel = Matrix::Zero(basis.rows(), basis.cols());
    sel.topLeftCorner(unit_dim, unit_dim).setIdentity();
    return basis * sel * basis_inv;
}

InvariantSplit unit_invariant_split(const Matrix& a, const SpectralReport& report,
                                    const SpectralTolerances& tol) {
    const int n = static_cast<int>(a.rows());
    require(report.n == n, ErrorCode::DimensionMismatch, "unit_invariant_split: report mismatch");
    require(report.d_max_unit <= 1, ErrorCode::Precondition,
            "unit_invariant_split: unit eigenvalues must have simple Jordan blocks");

    Matrix unit_basis(n, report.dim_ea);
    int col = 0;
    for (const auto& c : report.unit_eigs) {
        if (c.value.imag() < 0.0) continue;
        if (c.value.imag() == 0.0) {
            Matrix shifted_real = a;
            shifted_real.diagonal().array() -= c.value.real();
            const Matrix ns = real_null_space(shifted_real, c.algebraic);
            for (int k = 0; k < c.algebraic; ++k) {
                unit_basis.col(col) = ns.col(k);
                normalize_sign(unit_basis.col(col));
                ++col;
            }
        } else {
            const ComplexMatrix ns = null_space(shifted(a, c.value), c.algebraic);
            for (int k = 0; k < c.algebraic; ++k) {
                unit_basis.col(col++) = ns.col(k).real();
                unit_basis.col(col++) = ns.col(k).imag();
            }
        }
    }
    require(col == report.dim_ea, ErrorCode::IllConditioned,
            "unit_invariant_split: could not assemble a basis of E_A");

    // Range of prod (A - l I)^{a_l} over unit clusters is the sum of the
    // generalized eigenspaces of the remaining eigenvalues.
    ComplexMatrix annihilator = ComplexMatrix::Identity(n, n);
    for (const auto& c : report.unit_eigs) {
        const ComplexMatrix m = shifted(a, c.value);
        for (int k = 0; k < c.algebraic; ++k) annihilator = (annihilator * m).eval();
    }
    const Matrix real_part = annihilator.real();
    const int stable_dim = n - report.dim_ea;
    Matrix stable_basis(n, stable_dim);
    if (stable_dim > 0) {
        Eigen::JacobiSVD<Matrix> svd(real_part, Eigen::ComputeFullU);
        stable_basis = svd.matrixU().leftCols(stable_dim);
        for (int k = 0; k < stable_dim; ++k) normalize_sign(stable_basis.col(k));
    }

    InvariantSplit split;
    split.unit_dim = report.dim_ea;
    split.basis.resize(n, n);
    split.basis << unit_basis, stable_basis;
    Eigen::JacobiSVD<Matrix> svd(split.basis);
    const Vector& s = svd.singularValues();
    if (!(s(n - 1) > 1e-10 * s(0))) {
        fail(ErrorCode::IllConditioned, "unit_invariant_split: subspaces are nearly dependent");
    }
    split.basis_inv = split.basis.inverse();
    const Matrix proj = split.unit_projector();
    if ((proj * proj - proj).norm() > 1e-8 * (1.0 + proj.norm())) {
        fail(ErrorCode::IllConditioned, "unit_invariant_split: projector is not idempotent");
    }
    (void)tol;
    return split;
}

}  // namespace reachcert
