//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include "reachcert/spectral.hpp"
#include "reachcert/system_model.hpp"

namespace reachcert {

enum class Outcome {
    ReachableStable,
    ReachableCritical,
    NotReachableUnstable,
    NotReachableJordan,
    NotReachableDimension,
    InconclusiveAssumption,
};

enum class CertificateAdvice { Quadratic, Logarithmic, Composite, None };

const char* to_string(Outcome outcome);
const char* to_string(CertificateAdvice advice);

//! Keys identifying each decision in a branch trace.
namespace branch {
inline constexpr const char* kStable = "rho_below_band";
inline constexpr const char* kUnstable = "rho_above_band";
inline constexpr const char* kJordan = "unit_jordan_block_ge_2";
inline constexpr const char* kRankB = "rank_B_equals_n";
inline constexpr const char* kSquareB = "noise_dim_equals_n";
inline constexpr const char* kMoment = "third_moment_finite";
inline constexpr const char* kDimension = "dim_EA_le_2";
}  // namespace branch

/*!
 * One decision in the classification tree.
 *
 * `value` is the quantity tested and `threshold` the constant it was compared
 * against; `result` is the truth value of the predicate named by `key`.
 */
struct BranchStep {
    std::string key;
    std::string predicate;
    double value = 0.0;
    double threshold = 0.0;
    bool result = false;
};

struct Verdict {
    Outcome outcome = Outcome::InconclusiveAssumption;
    CertificateAdvice advice = CertificateAdvice::None;
    std::vector<BranchStep> trace;
    std::vector<std::string> warnings;
    SpectralReport spectrum;
    int rank_b = 0;
    //! Set when the advice is a certificate without a closed-form guarantee.
    bool verify_numerically = false;
};

Verdict classify(const LinearSystem& system, const TargetBall& target,
                 const SpectralTolerances& tol = {});

/// Re-derives the outcome from a trace alone; throws Schema if the trace is
/// incomplete for the path it describes.
Outcome replay_trace(const std::vector<BranchStep>& trace);

}  // namespace reachcert
