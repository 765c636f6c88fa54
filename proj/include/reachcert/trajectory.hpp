//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "reachcert/system_model.hpp"

namespace reachcert {

inline constexpr double kOverflowGuard = 1e300;

struct Trajectory {
    std::vector<Vector> states;
    bool overflow = false;
};

/// States x_0..x_horizon; stops early (flagged) once a coordinate leaves
/// [-1e300, 1e300] or stops being finite.
Trajectory simulate(const System& system, const Vector& x0, long long horizon,
                    TrajectorySeed seed);

struct EnsembleOptions {
    //! Default 1e6 (1 + ||x0||).
    std::optional<double> divergence_threshold;
    //! Steps at which occupancy of `occupancy_ball` is counted.
    std::vector<long long> occupancy_steps;
    std::optional<TargetBall> occupancy_ball;
};

struct HittingQuantile {
    double q = 0.0;
    std::optional<long long> steps;  // set only when hit_fraction >= q
};

struct EnsembleStats {
    long long trajectories = 0;
    long long horizon = 0;
    std::uint64_t seed = 0;
    long long hits = 0;
    double hit_fraction = 0.0;
    std::vector<HittingQuantile> quantiles;
    double divergence_threshold = 0.0;
    long long divergent = 0;
    long long overflowed = 0;
    double divergence_fraction = 0.0;
    std::vector<long long> occupancy_steps;
    std::vector<long long> occupancy_counts;
};

/*!
 * First-hit statistics of an open target over an ensemble.
 *
 * Trajectory i uses stream (base_seed, i). Every trajectory runs to the full
 * horizon so the divergence fraction refers to ||x_horizon||; overflowed
 * trajectories count as divergent.
 */
EnsembleStats hitting_stats(const System& system, const TargetBall& target, const Vector& x0,
                            long long n_traj, long long horizon, std::uint64_t base_seed,
                            const EnsembleOptions& options = {});

EnsembleStats hitting_stats(const System& system, const Region& target, const Vector& x0,
                            long long n_traj, long long horizon, std::uint64_t base_seed,
                            const EnsembleOptions& options = {});

struct DecayFit {
    std::vector<long long> k_grid;
    std::vector<long long> counts;
    std::vector<double> p_hat;
    long long trajectories = 0;
    int usable_points = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Log-spaced grid 2^lo .. 2^hi.
std::vector<long long> log2_grid(int lo, int hi);

/// Occupancy P(x_k in ball) from x0 = 0 and a weighted least-squares fit of
/// log p_hat against log k (weights = counts, zero counts dropped).
DecayFit decay_exponent(const System& system, const TargetBall& ball,
                        const std::vector<long long>& k_grid, long long n_traj,
                        std::uint64_t base_seed);

struct MomentStats {
    std::vector<long long> steps;
    std::vector<Vector> mean;
    std::vector<Matrix> covariance;
    long long trajectories = 0;
};

MomentStats ensemble_moments(const System& system, const Vector& x0,
                             const std::vector<long long>& steps, long long n_traj,
                             std::uint64_t base_seed);

}  // namespace reachcert
