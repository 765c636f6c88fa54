//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>

#include "reachcert/certificates.hpp"
#include "reachcert/spectral.hpp"
#include "reachcert/verifier.hpp"

namespace reachcert {

struct SynthesisOptions {
    SpectralTolerances tol;
    std::uint64_t seed = 1;
    //! Largest compact radius the drift scan may reach before giving up.
    double radius_cap = 1e8;
    double margin = 1e-6;
    int variant_points = 256;
    int variant_noise = 64;
    CompositeForm form = CompositeForm::Damped;
};

/*!
 * Quadratic certificate for a Schur-stable system.
 *
 * Q solves A^T Q A = Q - I, C = {x^T x <= tr(B^T Q B Sigma)} (alpha = 1),
 * b is the largest level with {x^T Q x < 2b} inside the target,
 * r0 = lambda_max(Q^{-1} A^T Q A) and delta = (1 - r0) b.
 */
QuadraticCertificate synthesize_quadratic(const LinearSystem& system, const TargetBall& target,
                                          const SpectralTolerances& tol = {});

struct LogSynthesis {
    LogCertificate certificate;
    RealPlaneBasis basis;
    ScanResult scan;
    DecreaseEstimate decrease;
};

/// Logarithmic certificate for a critical system whose whole spectrum lies on
/// the unit circle (n <= 2).
LogSynthesis synthesize_logarithmic(const LinearSystem& system, const TargetBall& target,
                                    const SynthesisOptions& options = {});

struct CompositeSynthesis {
    CompositeCertificate certificate;
    ScanResult scan;
    DecreaseEstimate decrease;
};

/// Log certificate on the unit-circle invariant subspace combined with a
/// quadratic one on the stable complement; unverified on return.
CompositeSynthesis synthesize_composite(const LinearSystem& system, const TargetBall& target,
                                        const SynthesisOptions& options = {});

/// Invariant weight for a unit-circle block, using any freedom left by A
/// (real eigenvalues +-1) to make the noise B Sigma B^T isotropic.
Matrix noise_adapted_weight(const Matrix& a, const Matrix& noise_cov, const RealPlaneBasis& basis,
                            const SpectralReport& report);

}  // namespace reachcert
