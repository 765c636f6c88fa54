//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <random>

namespace reachcert {

/// Identifies one independent random stream: the stream seed is a pure
/// function of (base, index), so trajectories can run in any order.
struct TrajectorySeed {
    std::uint64_t base = 0;
    std::uint64_t index = 0;

    TrajectorySeed child(std::uint64_t sub) const;
};

/// splitmix64 finalizer; bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_seed(TrajectorySeed s) {
    return mix64(mix64(s.base) ^ (s.index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

inline TrajectorySeed TrajectorySeed::child(std::uint64_t sub) const {
    return {stream_seed(*this), sub};
}

class RandomStream {
  public:
    explicit RandomStream(TrajectorySeed seed) : engine_(stream_seed(seed)) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double uniform01() { return uniform(0.0, 1.0); }
    double normal() { return normal_(engine_); }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace reachcert
