//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include "reachcert/linalg.hpp"

namespace reachcert {

struct SpectralTolerances {
    double unit_tol = 1e-9;
    double rank_tol = linalg::kDefaultRankTol;
    double cluster_tol = linalg::kDefaultClusterTol;
};

/// One eigenvalue cluster with its Jordan data.
struct ClusterStructure {
    Complex value;
    int algebraic = 0;
    int geometric = 0;
    /// Largest Jordan block, from the first k with rank((A-lI)^k) = rank((A-lI)^(k+1)).
    int block_size = 0;
    bool unit = false;
};

struct SpectralReport {
    int n = 0;
    double rho = 0.0;
    double unit_tol = 0.0;
    std::vector<ClusterStructure> clusters;   // every cluster, sorted by modulus
    std::vector<ClusterStructure> unit_eigs;  // the subset with ||l| - 1| <= unit_tol
    int dim_ea = 0;
    int d_max_unit = 0;
    double stable_part_rho = 0.0;
    bool ambiguous_clustering = false;
    int merged_clusters = 0;
    std::vector<std::string> notes;
};

/*!
 * Structural facts about A used by the classifier.
 *
 * Eigenvalues are clustered at cluster_tol, then nearby clusters are merged
 * when the merged mean mu passes the algebraic-multiplicity test
 * dim ker (A - mu I)^a = a. Rounding splits a defective eigenvalue with a
 * block of size d by roughly eps^(1/d), far beyond cluster_tol, and the
 * merge step recovers it.
 */
SpectralReport analyze(const Matrix& a, const SpectralTolerances& tol = {});

/// Basis P with P^{-1} A P a rotation block (or +-1 diagonal) and the
/// invariant weight Q* = (P P^T)^{-1}, scaled so that lambda_max(Q*) = 1.
struct RealPlaneBasis {
    Matrix p;
    Matrix q_star;
};

RealPlaneBasis unit_plane_basis(const Matrix& a, const SpectralReport& report);

/// Real basis T = [U S] where U spans the unit-circle eigenspace E_A and S
/// the complementary invariant subspace; T^{-1} A T is block diagonal.
struct InvariantSplit {
    Matrix basis;
    Matrix basis_inv;
    int unit_dim = 0;

    Matrix unit_projector() const;
};

InvariantSplit unit_invariant_split(const Matrix& a, const SpectralReport& report,
                                    const SpectralTolerances& tol = {});

}  // namespace reachcert
