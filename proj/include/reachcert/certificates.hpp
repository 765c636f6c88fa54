//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "reachcert/linalg.hpp"
#include "reachcert/random.hpp"
#include "reachcert/system_model.hpp"

namespace reachcert {

enum class CertificateKind { Quadratic, Logarithmic, Composite, Custom };

const char* to_string(CertificateKind kind);

/*!
 * A drift function V paired with a variant function U.
 *
 * Besides evaluating V and U, a certificate knows the geometry the verifier
 * needs: an ellipsoidal shell norm whose level sets carry the drift test
 * points, the radius of the compact set C in that norm, the level-wise bound
 * H on U, and a bounding box for each sublevel set {V <= r} from which
 * candidates are drawn by rejection.
 */
class Certificate {
  public:
    virtual ~Certificate() = default;

    virtual CertificateKind kind() const = 0;
    virtual int dim() const = 0;

    virtual double drift(const Vector& x) const = 0;
    virtual double variant(const Vector& x) const = 0;
    /// H(r): an upper bound of U on {V <= r}.
    virtual double variant_bound(double level) const = 0;
    /// Infimum of V over the state space.
    virtual double drift_floor() const = 0;
    /// Draws a point uniformly from a box containing {V <= level}. Returns the
    /// box volume, or 0 when the level is below the floor.
    virtual double propose_in_sublevel(double level, RandomStream& rng, Vector& out) const = 0;

    /// Set when V(x) = x^T Q x exactly, enabling closed-form drift.
    virtual const Matrix* quadratic_form() const { return nullptr; }

    virtual double shell_norm(const Vector& x) const;
    /// Point with shell_norm == radius, direction uniform for the metric.
    virtual Vector shell_point(double radius, RandomStream& rng) const;
    /// Point on {U = 0}, found by bisection along a random ray from the origin.
    virtual Vector variant_zero_point(RandomStream& rng) const;

    double compact_radius() const { return compact_radius_; }
    double decrease() const { return delta_; }
    /// Estimated probability of the decrease event; NaN when unknown.
    double probability() const { return epsilon_; }
    const std::vector<std::string>& notes() const { return notes_; }

    void set_compact_radius(double r);
    void set_decrease(double delta);
    void set_probability(double eps) { epsilon_ = eps; }
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

  protected:
    explicit Certificate(Matrix shell_metric);

    Matrix shell_metric_;
    Matrix shell_factor_;  // shell_metric^{-1/2}
    double compact_radius_ = 0.0;
    double delta_ = 0.0;
    double epsilon_ = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> notes_;
};

/// V(x) = x^T Q x, U = V - b, H(r) = r - b.
class QuadraticCertificate final : public Certificate {
  public:
    QuadraticCertificate(Matrix q, double b);

    CertificateKind kind() const override { return CertificateKind::Quadratic; }
    int dim() const override { return static_cast<int>(q_.rows()); }
    double drift(const Vector& x) const override { return x.dot(q_ * x); }
    double variant(const Vector& x) const override { return drift(x) - b_; }
    double variant_bound(double level) const override { return level - b_; }
    double drift_floor() const override { return 0.0; }
    double propose_in_sublevel(double level, RandomStream& rng, Vector& out) const override;
    const Matrix* quadratic_form() const override { return &q_; }

    const Matrix& q() const { return q_; }
    double b() const { return b_; }

    double alpha = 1.0;
    double r0 = 0.0;
    double noise_set_bound = 0.0;
    double compact_radius_sq() const { return compact_radius_ * compact_radius_; }

  private:
    Matrix q_;
    Matrix q_inv_diag_sqrt_;
    double b_;
};

/// V(x) = sqrt(ln max(||x||_*, rho_min)), U = ||x||_*^2 - b, H(r) = exp(2 r^2) - b.
class LogCertificate final : public Certificate {
  public:
    LogCertificate(Matrix q_star, double b, double rho_min = std::exp(1.0));

    CertificateKind kind() const override { return CertificateKind::Logarithmic; }
    int dim() const override { return static_cast<int>(q_star_.rows()); }
    double drift(const Vector& x) const override;
    double variant(const Vector& x) const override { return x.dot(q_star_ * x) - b_; }
    double variant_bound(double level) const override;
    double drift_floor() const override { return std::sqrt(std::log(rho_min_)); }
    double propose_in_sublevel(double level, RandomStream& rng, Vector& out) const override;

    const Matrix& q_star() const { return q_star_; }
    double b() const { return b_; }
    double domain_threshold() const { return rho_min_; }

  private:
    Matrix q_star_;
    Vector half_width_unit_;
    double b_;
    double rho_min_;
};

enum class CompositeForm {
    //! V_log(z_u) + z_s^T Q z_s / (m^2 (ln m)^4), m = max(||z_u||_*, e).
    Damped,
    //! V_log(z_u) + z_s^T Q z_s.
    Additive,
};

const char* to_string(CompositeForm form);

/*!
 * Certificate in coordinates z = T^{-1} x adapted to the split of the state
 * space into the unit-circle invariant subspace (first unit_dim coordinates)
 * and its stable complement.
 *
 * U = ||z_u||_*^2 + z_s^T Q z_s - b.
 */
class CompositeCertificate final : public Certificate {
  public:
    CompositeCertificate(Matrix basis, int unit_dim, Matrix q_star, Matrix q, double b,
                         CompositeForm form = CompositeForm::Damped);

    CertificateKind kind() const override { return CertificateKind::Composite; }
    int dim() const override { return static_cast<int>(basis_.rows()); }
    double drift(const Vector& x) const override;
    double variant(const Vector& x) const override;
    double variant_bound(double level) const override;
    double drift_floor() const override { return 1.0; }
    double propose_in_sublevel(double level, RandomStream& rng, Vector& out) const override;

    const Matrix& basis() const { return basis_; }
    const Matrix& basis_inv() const { return basis_inv_; }
    int unit_dim() const { return unit_dim_; }
    const Matrix& q_star() const { return q_star_; }
    const Matrix& q() const { return q_; }
    double b() const { return b_; }
    CompositeForm form() const { return form_; }
    /// Quadratic form of U + b in the original coordinates.
    Matrix variant_form() const;

    bool verified = false;

  private:
    double stable_weight(double unit_norm) const;

    Matrix basis_, basis_inv_;
    int unit_dim_;
    Matrix q_star_, q_;
    Vector unit_half_, stable_half_;
    double b_;
    CompositeForm form_;
};

/// Certificate given by callables, for systems outside the linear family.
class FunctionCertificate final : public Certificate {
  public:
    struct Parts {
        int dim = 0;
        std::function<double(const Vector&)> drift;
        std::function<double(const Vector&)> variant;
        std::function<double(double)> variant_bound;
        double drift_floor = 0.0;
        std::function<double(double, RandomStream&, Vector&)> propose;
        std::function<double(const Vector&)> shell_norm;
        std::function<Vector(double, RandomStream&)> shell_point;
    };

    explicit FunctionCertificate(Parts parts);

    CertificateKind kind() const override { return CertificateKind::Custom; }
    int dim() const override { return parts_.dim; }
    double drift(const Vector& x) const override { return parts_.drift(x); }
    double variant(const Vector& x) const override { return parts_.variant(x); }
    double variant_bound(double level) const override { return parts_.variant_bound(level); }
    double drift_floor() const override { return parts_.drift_floor; }
    double propose_in_sublevel(double level, RandomStream& rng, Vector& out) const override {
        return parts_.propose(level, rng, out);
    }
    double shell_norm(const Vector& x) const override;
    Vector shell_point(double radius, RandomStream& rng) const override;

  private:
    Parts parts_;
};

/// Largest b with {x^T M x < 2 b} contained in the target ball; the ball must
/// contain the origin.
double inner_variant_level(const Matrix& m, const TargetBall& target);

/// Uniform direction on the unit sphere of R^n.
Vector random_direction(int n, RandomStream& rng);

}  // namespace reachcert
