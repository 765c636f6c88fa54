//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reachcert/certificates.hpp"
#include "reachcert/system_model.hpp"

namespace reachcert {

using ScalarField = std::function<double(const Vector&)>;

/// Exact one-step drift of V = x^T Q x for a linear system.
double exact_quadratic_drift(const LinearSystem& system, const Matrix& q, const Vector& x);

struct McEstimate {
    double mean = 0.0;
    double half_width = 0.0;  // 3 sigma / sqrt(independent draws)
    long long samples = 0;
};

/*!
 * Monte-Carlo estimate of E[V(f(x, w))] - V(x).
 *
 * With `antithetic` set, draws come in pairs (w, -w) and the half-width uses
 * the spread of pair means. Every supported noise law is symmetric, so the
 * estimator stays unbiased while the first-order term cancels exactly.
 */
McEstimate mc_drift(const System& system, const ScalarField& v, const Vector& x,
                    long long samples, TrajectorySeed seed, bool antithetic = true);

/// Deterministic second-order estimate of the drift from symmetric sigma
/// points s_k = sqrt(lambda_k) u_k of the noise covariance.
double second_order_drift(const System& system, const ScalarField& v, const Vector& x);

struct DriftPlan {
    std::vector<double> radii;
    int points_per_shell = 64;
    long long noise_samples = 4096;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
};

/// Shells at compact_radius * 2^j, j = 0..6 (radius 1 when C is a point).
DriftPlan default_drift_plan(const Certificate& cert, std::uint64_t seed = 1);

struct DriftViolation {
    Vector x;
    double estimate = 0.0;
    double half_width = 0.0;
};

struct ShellResult {
    double radius = 0.0;
    int points = 0;
    int violations = 0;
    double worst_estimate = 0.0;
    double worst_half_width = 0.0;
    Vector worst_x;
};

struct DriftReport {
    DriftPlan plan;
    bool exact = false;
    std::vector<ShellResult> shells;
    std::vector<DriftViolation> violations;
    bool passed = false;
};

DriftReport verify_drift(const System& system, const Certificate& cert, const DriftPlan& plan);

struct VariantPlan {
    std::vector<double> levels;
    int points_per_level = 512;
    int noise_per_point = 200;
    int boundary_points = 1000;
    long long max_proposals = 20000000;
    std::uint64_t seed = 1;
    //! Decrease to test; the certificate's own delta when unset.
    std::optional<double> delta;
};

/// Candidate points in {V <= r, U > 0} with the decreases U(x) - U(f(x, w)).
struct VariantSamples {
    double level = 0.0;
    std::vector<Vector> points;
    Matrix decrease;  // points x noise draws
    long long proposals = 0;
    int h_violations = 0;
    double max_u_minus_h = -std::numeric_limits<double>::infinity();
};

VariantSamples sample_variant_level(const System& system, const Certificate& cert, double level,
                                    int points, int noise_per_point, TrajectorySeed seed,
                                    long long max_proposals);

struct VariantLevel {
    double level = 0.0;
    int points = 0;
    long long proposals = 0;
    double acceptance = 0.0;
    double delta_hat = 0.0;  // half of the smallest best-case decrease
    double epsilon_hat = 0.0;
    double epsilon_sigma = 0.0;
    double worst_point_fraction = 0.0;
    Vector worst_x;
    int h_violations = 0;
    double max_u_minus_h = 0.0;
};

struct VariantReport {
    double delta = 0.0;
    std::vector<VariantLevel> levels;
    std::string region;
    int inclusion_points = 0;
    int inclusion_violations = 0;
    std::optional<Vector> inclusion_witness;
    bool passed = false;
};

VariantReport verify_variant(const System& system, const Certificate& cert, const Region& target,
                             const VariantPlan& plan);

/// Levels just above the compact set where {U > 0} is non-empty.
std::vector<double> default_variant_levels(const Certificate& cert);

struct DecreaseEstimate {
    double delta = 0.0;
    double epsilon = 0.0;
    std::vector<double> levels;
    std::vector<double> level_delta;
    std::vector<double> level_epsilon;
};

/// delta = min over levels of delta_hat(r); epsilon = min over levels of the
/// pooled decrease frequency at that delta.
DecreaseEstimate estimate_decrease(const System& system, const Certificate& cert,
                                   const std::vector<double>& levels, int points,
                                   int noise_per_point, std::uint64_t seed);

struct ScanOptions {
    double start = 0.0;
    double cap = 1e8;
    double margin = 1e-6;
    int points = 0;  // 0 selects 64 (n <= 3) or 256
    long long mc_samples = 4096;
    long long mc_max_samples = 262144;  // refinement cap for inconclusive points
    std::uint64_t seed = 1;
};

struct ScanAttempt {
    double radius = 0.0;
    double worst_second_order = 0.0;  // max of drift + margin |V|
    double worst_mc_upper = 0.0;      // max of mean + half_width - tolerance
    bool passed = false;
};

struct ScanResult {
    double radius = 0.0;
    bool found = false;
    std::vector<ScanAttempt> attempts;
};

/// Doubles the shell radius from `start` until every sampled shell point has
/// second-order drift <= -margin |V| and no Monte-Carlo violation.
ScanResult scan_compact_radius(const System& system, const Certificate& cert,
                               const ScanOptions& options);

}  // namespace reachcert
