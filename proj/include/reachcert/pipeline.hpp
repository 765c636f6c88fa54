//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "reachcert/io.hpp"

namespace reachcert::pipeline {

inline constexpr const char* kVersion = "0.1.0";

/// Run settings shared by every command; zero counts select the defaults.
struct Settings {
    SpectralTolerances tol;
    std::uint64_t seed = 1;
    long long samples = 0;
    long long horizon = 0;
    long long trajectories = 0;
    std::optional<double> target_radius;
    std::optional<Vector> target_center;
    std::optional<Vector> x0;
};

struct Result {
    io::Json report;
    bool passed = true;
    std::unique_ptr<Certificate> certificate;
};

/// Flags override the certificate's recorded target, which overrides the
/// system file's; the fallback is the unit ball at the origin.
TargetBall resolve_target(const io::SystemFile& file, const Settings& settings,
                          const std::optional<TargetBall>& recorded = std::nullopt);

Result classify(const io::SystemFile& file, const Settings& settings);
/// Classify, synthesize the advised certificate and verify it numerically.
Result certify(const io::SystemFile& file, const Settings& settings);
Result verify(const io::SystemFile& file, const Certificate& cert,
              const std::optional<TargetBall>& recorded, const Settings& settings);
Result simulate(const io::SystemFile& file, const Settings& settings);
/// example1-bounds, example1-certificate, example1-refute or example2.
Result repro(const std::string& target, const Settings& settings);

/// One trajectory as CSV with header k,x1..xn.
std::string trajectory_csv(const System& system, const Vector& x0, long long horizon,
                           std::uint64_t seed);

/// Certificate JSON with the target it was synthesized for.
io::Json certificate_json(const Certificate& cert, const TargetBall& target);
std::optional<TargetBall> recorded_target(const io::Json& certificate, int dim);

Vector default_x0(int dim);

inline constexpr long long kDefaultTrajectories = 1000;
inline constexpr long long kDefaultHorizon = 10000;

}  // namespace reachcert::pipeline
