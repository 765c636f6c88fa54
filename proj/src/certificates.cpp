//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "reachcert/error.hpp"

namespace reachcert {

const char* to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::Quadratic: return "quadratic";
        case CertificateKind::Logarithmic: return "logarithmic";
        case CertificateKind::Composite: return "composite";
        case CertificateKind::Custom: return "custom";
    }
    return "unknown";
}

const char* to_string(CompositeForm form) {
    return form == CompositeForm::Damped ? "damped" : "additive";
}

namespace {

void require_spd(const Matrix& m, const char* what) {
    linalg::require_square(m, what);
    linalg::require_finite(m, what);
    if (!linalg::is_symmetric(m, 1e-10) || !linalg::is_positive_definite(m)) {
        fail(ErrorCode::Schema, std::string(what) + ": matrix must be symmetric positive definite");
    }
}

Vector inverse_diag_sqrt(const Matrix& m) {
    return m.inverse().diagonal().cwiseMax(0.0).cwiseSqrt();
}

double fill_box(const Vector& half, RandomStream& rng, Eigen::Ref<Vector> out) {
    double volume = 1.0;
    for (Eigen::Index i = 0; i < half.size(); ++i) {
        out(i) = rng.uniform(-half(i), half(i));
        volume *= 2.0 * half(i);
    }
    return volume;
}

[[noreturn]] void fail_box_overflow(double level) {
    std::ostringstream os;
    os << "sublevel set {V <= " << level << "} exceeds the floating-point range";
    fail(ErrorCode::InsufficientData, os.str());
}

}  // namespace

Vector random_direction(int n, RandomStream& rng) {
    Vector u(n);
    double norm = 0.0;
    do {
        for (int i = 0; i < n; ++i) u(i) = rng.normal();
        norm = u.norm();
    } while (!(norm > 1e-300));
    return u / norm;
}

double inner_variant_level(const Matrix& m, const TargetBall& target) {
    require(target.dim() == m.rows(), ErrorCode::DimensionMismatch,
            "variant level: target dimension mismatch");
    const Vector origin = Vector::Zero(target.dim());
    const double offset = target.distance(origin);
    require(offset < target.radius, ErrorCode::Precondition,
            "variant level: the target must contain the origin");
    const double slack = target.radius - offset;
    if (target.weight) {
        const double k = linalg::max_generalized_eigenvalue(*target.weight, m);
        return slack * slack / (2.0 * k);
    }
    return linalg::min_eigenvalue_sym(m) * slack * slack / 2.0;
}

Certificate::Certificate(Matrix shell_metric) : shell_metric_(std::move(shell_metric)) {
    require_spd(shell_metric_, "certificate shell metric");
    shell_factor_ = linalg::sqrt_spd(shell_metric_).inverse();
}

double Certificate::shell_norm(const Vector& x) const {
    return linalg::weighted_norm(x, shell_metric_);
}

Vector Certificate::shell_point(double radius, RandomStream& rng) const {
    return radius * (shell_factor_ * random_direction(dim(), rng));
}

Vector Certificate::variant_zero_point(RandomStream& rng) const {
    const Vector d = shell_point(1.0, rng);
    require(variant(Vector::Zero(dim())) < 0.0, ErrorCode::Precondition,
            "variant zero point: U must be negative at the origin");
    double lo = 0.0, hi = 1.0;
    while (variant(hi * d) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        require(hi < 1e300, ErrorCode::NonConvergence,
                "variant zero point: {U <= 0} is unbounded along a ray");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (variant(mid * d) <= 0.0 ? lo : hi) = mid;
    }
    return lo * d;
}

void Certificate::set_compact_radius(double r) {
    require(std::isfinite(r) && r >= 0.0, ErrorCode::InvalidArgument,
            "compact radius must be finite and non-negative");
    compact_radius_ = r;
}

void Certificate::set_decrease(double delta) {
    require(std::isfinite(delta) && delta > 0.0, ErrorCode::InvalidArgument,
            "decrease delta must be positive");
    delta_ = delta;
}

QuadraticCertificate::QuadraticCertificate(Matrix q, double b)
    : Certificate(Matrix::Identity(q.rows(), q.rows())), q_(std::move(q)), b_(b) {
    require_spd(q_, "quadratic certificate Q");
    require(std::isfinite(b_) && b_ > 0.0, ErrorCode::Schema, "quadratic certificate: b must be positive");
    q_ = 0.5 * (q_ + q_.transpose()).eval();
    q_inv_diag_sqrt_ = inverse_diag_sqrt(q_);
}

double QuadraticCertificate::propose_in_sublevel(double level, RandomStream& rng,
                                                 Vector& out) const {
    if (!(level > 0.0)) return 0.0;
    out.resize(dim());
    return fill_box(std::sqrt(level) * q_inv_diag_sqrt_, rng, out);
}

LogCertificate::LogCertificate(Matrix q_star, double b, double rho_min)
    : Certificate(q_star), q_star_(std::move(q_star)), b_(b), rho_min_(rho_min) {
    require(std::isfinite(b_) && b_ > 0.0, ErrorCode::Schema, "log certificate: b must be positive");
    require(std::isfinite(rho_min_) && rho_min_ >= std::numbers::e * (1.0 - 1e-15),
            ErrorCode::Schema, "log certificate: domain threshold must be at least e");
    q_star_ = 0.5 * (q_star_ + q_star_.transpose()).eval();
    half_width_unit_ = inverse_diag_sqrt(q_star_);
}

double LogCertificate::drift(const Vector& x) const {
    const double r = std::sqrt(std::max(x.dot(q_star_ * x), 0.0));
    return std::sqrt(std::log(std::max(r, rho_min_)));
}

double LogCertificate::variant_bound(double level) const {
    return std::exp(2.0 * level * level) - b_;
}

double LogCertificate::propose_in_sublevel(double level, RandomStream& rng, Vector& out) const {
    if (level < drift_floor()) return 0.0;
    if (!std::isfinite(std::exp(2.0 * level * level))) fail_box_overflow(level);
    out.resize(dim());
    return fill_box(std::exp(level * level) * half_width_unit_, rng, out);
}

CompositeCertificate::CompositeCertificate(Matrix basis, int unit_dim, Matrix q_star, Matrix q,
                                           double b, CompositeForm form)
    : Certificate(Matrix::Identity(basis.rows(), basis.rows())),
      basis_(std::move(basis)),
      unit_dim_(unit_dim),
      q_star_(std::move(q_star)),
      q_(std::move(q)),
      b_(b),
      form_(form) {
    const int n = static_cast<int>(basis_.rows());
    linalg::require_square(basis_, "composite basis");
    linalg::require_finite(basis_, "composite basis");
    require(unit_dim_ >= 1 && unit_dim_ < n, ErrorCode::Schema,
            "composite certificate: both parts must be non-empty");
    require(q_star_.rows() == unit_dim_ && q_.rows() == n - unit_dim_, ErrorCode::Schema,
            "composite certificate: part dimensions do not add up to n");
    require_spd(q_star_, "composite certificate Q_star");
    require_spd(q_, "composite certificate Q");
    require(std::isfinite(b_) && b_ > 0.0, ErrorCode::Schema,
            "composite certificate: b must be positive");
    Eigen::JacobiSVD<Matrix> svd(basis_);
    const Vector& s = svd.singularValues();
    require(s(n - 1) > 1e-12 * s(0), ErrorCode::Schema, "composite certificate: singular basis");
    basis_inv_ = basis_.inverse();
    unit_half_ = inverse_diag_sqrt(q_star_);
    stable_half_ = inverse_diag_sqrt(q_);
    // Shells are ellipsoids of U + b.
    shell_metric_ = variant_form();
    shell_factor_ = linalg::sqrt_spd(shell_metric_).inverse();
}

Matrix CompositeCertificate::variant_form() const {
    const int n = dim();
    Matrix w = Matrix::Zero(n, n);
    w.topLeftCorner(unit_dim_, unit_dim_) = q_star_;
    w.bottomRightCorner(n - unit_dim_, n - unit_dim_) = q_;
    Matrix m = basis_inv_.transpose() * w * basis_inv_;
    return 0.5 * (m + m.transpose());
}

double CompositeCertificate::stable_weight(double unit_norm) const {
    if (form_ == CompositeForm::Additive) return 1.0;
    const double m = std::max(unit_norm, std::numbers::e);
    const double l = std::log(m);
    return 1.0 / (m * m * l * l * l * l);
}

double CompositeCertificate::drift(const Vector& x) const {
    const Vector z = basis_inv_ * x;
    const auto zu = z.head(unit_dim_);
    const auto zs = z.tail(dim() - unit_dim_);
    const double nu = std::sqrt(std::max(zu.dot(q_star_ * zu), 0.0));
    const double vlog = std::sqrt(std::log(std::max(nu, std::numbers::e)));
    return vlog + zs.dot(q_ * zs) * stable_weight(nu);
}

double CompositeCertificate::variant(const Vector& x) const {
    const Vector z = basis_inv_ * x;
    const auto zu = z.head(unit_dim_);
    const auto zs = z.tail(dim() - unit_dim_);
    return zu.dot(q_star_ * zu) + zs.dot(q_ * zs) - b_;
}

double CompositeCertificate::variant_bound(double level) const {
    const double unit_sq = std::exp(2.0 * level * level);
    double stable = level;
    if (form_ == CompositeForm::Damped) {
        const double r2 = level * level;
        stable = level * std::max(unit_sq * r2 * r2 * r2 * r2, std::exp(2.0));
    }
    return unit_sq + stable - b_;
}

double CompositeCertificate::propose_in_sublevel(double level, RandomStream& rng,
                                                 Vector& out) const {
    if (level < drift_floor()) return 0.0;
    const int n = dim();
    const double unit_sq = std::exp(2.0 * level * level);
    double stable_sq = level;
    if (form_ == CompositeForm::Damped) {
        const double r2 = level * level;
        stable_sq = level * std::max(unit_sq * r2 * r2 * r2 * r2, std::exp(2.0));
    }
    if (!std::isfinite(unit_sq * stable_sq)) fail_box_overflow(level);
    Vector z(n);
    double volume = fill_box(std::sqrt(unit_sq) * unit_half_, rng, z.head(unit_dim_));
    volume *= fill_box(std::sqrt(stable_sq) * stable_half_, rng, z.tail(n - unit_dim_));
    out = basis_ * z;
    return volume * std::abs(basis_.determinant());
}

FunctionCertificate::FunctionCertificate(Parts parts)
    : Certificate(Matrix::Identity(parts.dim, parts.dim)), parts_(std::move(parts)) {
    require(parts_.dim > 0 && parts_.drift && parts_.variant && parts_.variant_bound &&
                parts_.propose,
            ErrorCode::InvalidArgument, "function certificate: missing parts");
}

double FunctionCertificate::shell_norm(const Vector& x) const {
    return parts_.shell_norm ? parts_.shell_norm(x) : Certificate::shell_norm(x);
}

Vector FunctionCertificate::shell_point(double radius, RandomStream& rng) const {
    return parts_.shell_point ? parts_.shell_point(radius, rng)
                              : Certificate::shell_point(radius, rng);
}

}  // namespace reachcert
