//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reachcert/linalg.hpp"
#include "reachcert/polynomial.hpp"
#include "reachcert/random.hpp"

namespace reachcert {

enum class NoiseKind { Gaussian, UniformBox, UniformIntervalProduct };

const char* to_string(NoiseKind kind);

/*!
 * Zero-mean i.i.d. noise law.
 *
 * Gaussian noise is parameterized by its covariance. The two uniform
 * families are parameterized by half-widths h; their covariance diag(h^2/3)
 * is derived. A uniform box has one common half-width (a cube), an interval
 * product allows a different half-width per coordinate.
 */
class NoiseModel {
  public:
    static NoiseModel gaussian(const Matrix& cov);
    static NoiseModel uniform_box(const Vector& half_widths);
    static NoiseModel uniform_interval_product(const Vector& half_widths);

    NoiseKind kind() const { return kind_; }
    int dim() const { return static_cast<int>(cov_.rows()); }
    const Matrix& covariance() const { return cov_; }
    const Vector& half_widths() const { return half_widths_; }
    /// E||w||^3 < inf holds for every supported family.
    bool third_moment_finite() const { return true; }

    void draw(RandomStream& rng, Vector& out) const;

  private:
    NoiseKind kind_ = NoiseKind::Gaussian;
    Matrix cov_;
    Matrix chol_;
    Vector half_widths_;
};

std::vector<Vector> sample_noise(const NoiseModel& noise, TrajectorySeed seed,
                                 long long count);

/// x+ = A x + B w
struct LinearSystem {
    Matrix a;
    Matrix b;
    NoiseModel noise;

    int state_dim() const { return static_cast<int>(a.rows()); }
    int noise_dim() const { return static_cast<int>(b.cols()); }
};

LinearSystem make_linear_system(Matrix a, Matrix b, NoiseModel noise);

/// x+_i = p_i(x, w) for polynomial expressions p_i.
struct PolynomialSystem {
    std::vector<Polynomial> transition;
    NoiseModel noise;

    int state_dim() const { return static_cast<int>(transition.size()); }
    int noise_dim() const { return noise.dim(); }
};

PolynomialSystem make_polynomial_system(const std::vector<std::string>& transition,
                                        NoiseModel noise);

using System = std::variant<LinearSystem, PolynomialSystem>;

int state_dim(const System& s);
const NoiseModel& noise_of(const System& s);

/// Checked step: dimensions verified, non-finite results rejected.
Vector step(const System& s, const Vector& x, const Vector& w);
Vector step(const LinearSystem& s, const Vector& x, const Vector& w);

/// Unchecked step for inner loops; out must not alias x.
void step_into(const System& s, const Vector& x, const Vector& w, Vector& out);

/// Open ball {x : ||x - center|| < radius}, Euclidean or weighted by a PD
/// matrix W (||v||_W = sqrt(v^T W v)).
struct TargetBall {
    Vector center;
    double radius = 1.0;
    std::optional<Matrix> weight;

    int dim() const { return static_cast<int>(center.size()); }
    double distance(const Vector& x) const;
};

TargetBall make_target(Vector center, double radius,
                       std::optional<Matrix> weight = std::nullopt);

bool contains(const TargetBall& target, const Vector& x);

/// General open target set given by a membership predicate.
struct Region {
    std::string description;
    std::function<bool(const Vector&)> contains;
};

Region region_of(const TargetBall& target);

}  // namespace reachcert
