//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/system_model.hpp"

#include <cmath>
#include <sstream>

#include "reachcert/error.hpp"

namespace reachcert {

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Gaussian: return "gaussian";
        case NoiseKind::UniformBox: return "uniform-box";
        case NoiseKind::UniformIntervalProduct: return "uniform-interval-product";
    }
    return "unknown";
}

namespace {

void check_half_widths(const Vector& h) {
    require(h.size() > 0, ErrorCode::InvalidArgument, "noise: half_widths must be non-empty");
    require(h.allFinite() && (h.array() > 0.0).all(), ErrorCode::InvalidArgument,
            "noise: half_widths must be finite and positive");
}

}  // namespace

NoiseModel NoiseModel::gaussian(const Matrix& cov) {
    require(cov.rows() == cov.cols() && cov.rows() > 0, ErrorCode::InvalidArgument,
            "noise: gaussian covariance must be a non-empty square matrix");
    require(cov.allFinite(), ErrorCode::InvalidArgument, "noise: covariance must be finite");
    require(linalg::is_positive_definite(cov), ErrorCode::InvalidArgument,
            "noise: gaussian covariance must be symmetric positive definite");
    NoiseModel m;
    m.kind_ = NoiseKind::Gaussian;
    m.cov_ = 0.5 * (cov + cov.transpose());
    m.chol_ = Eigen::LLT<Matrix>(m.cov_).matrixL();
    return m;
}

NoiseModel NoiseModel::uniform_box(const Vector& half_widths) {
    check_half_widths(half_widths);
    require((half_widths.array() == half_widths(0)).all(), ErrorCode::InvalidArgument,
            "noise: uniform-box needs one common half-width; use "
            "uniform-interval-product for per-coordinate widths");
    NoiseModel m = uniform_interval_product(half_widths);
    m.kind_ = NoiseKind::UniformBox;
    return m;
}

NoiseModel NoiseModel::uniform_interval_product(const Vector& half_widths) {
    check_half_widths(half_widths);
    NoiseModel m;
    m.kind_ = NoiseKind::UniformIntervalProduct;
    m.half_widths_ = half_widths;
    m.cov_ = (half_widths.array().square() / 3.0).matrix().asDiagonal();
    return m;
}

void NoiseModel::draw(RandomStream& rng, Vector& out) const {
    const Eigen::Index m = cov_.rows();
    out.resize(m);
    if (kind_ == NoiseKind::Gaussian) {
        for (Eigen::Index i = 0; i < m; ++i) out[i] = rng.normal();
        out = (chol_.triangularView<Eigen::Lower>() * out).eval();
    } else {
        for (Eigen::Index i = 0; i < m; ++i) {
            out[i] = rng.uniform(-half_widths_[i], half_widths_[i]);
        }
    }
}

std::vector<Vector> sample_noise(const NoiseModel& noise, TrajectorySeed seed,
                                 long long count) {
    require(count >= 0, ErrorCode::InvalidArgument, "sample_noise: count must be >= 0");
    RandomStream rng(seed);
    std::vector<Vector> out(static_cast<std::size_t>(count));
    for (auto& w : out) noise.draw(rng, w);
    return out;
}

LinearSystem make_linear_system(Matrix a, Matrix b, NoiseModel noise) {
    linalg::require_square(a, "system A");
    linalg::require_finite(a, "system A");
    linalg::require_finite(b, "system B");
    if (b.rows() != a.rows()) {
        std::ostringstream os;
        os << "system B: expected " << a.rows() << " rows, got " << b.rows();
        fail(ErrorCode::DimensionMismatch, os.str());
    }
    if (b.cols() != noise.dim()) {
        std::ostringstream os;
        os << "system B: has " << b.cols() << " columns but noise dimension is "
           << noise.dim();
        fail(ErrorCode::DimensionMismatch, os.str());
    }
    return LinearSystem{std::move(a), std::move(b), std::move(noise)};
}

PolynomialSystem make_polynomial_system(const std::vector<std::string>& transition,
                                        NoiseModel noise) {
    require(!transition.empty(), ErrorCode::Schema, "transition must list one polynomial per state");
    const int n = static_cast<int>(transition.size());
    PolynomialSystem sys;
    sys.noise = std::move(noise);
    for (const auto& text : transition) {
        sys.transition.push_back(Polynomial::parse(text, n, sys.noise.dim()));
    }
    return sys;
}

int state_dim(const System& s) {
    return std::visit([](const auto& sys) { return sys.state_dim(); }, s);
}

const NoiseModel& noise_of(const System& s) {
    return std::visit([](const auto& sys) -> const NoiseModel& { return sys.noise; }, s);
}

namespace {

void check_step_dims(int n, int m, const Vector& x, const Vector& w) {
    if (x.size() != n || w.size() != m) {
        std::ostringstream os;
        os << "step: expected x in R^" << n << " and w in R^" << m << ", got "
           << x.size() << " and " << w.size();
        fail(ErrorCode::DimensionMismatch, os.str());
    }
}

void check_finite_result(const Vector& out) {
    if (!out.allFinite()) {
        fail(ErrorCode::NonFinite, "step: state overflowed to a non-finite value");
    }
}

}  // namespace

void step_into(const System& s, const Vector& x, const Vector& w, Vector& out) {
    if (const auto* lin = std::get_if<LinearSystem>(&s)) {
        out.noalias() = lin->a * x;
        out.noalias() += lin->b * w;
        return;
    }
    const auto& poly = std::get<PolynomialSystem>(s);
    out.resize(poly.state_dim());
    for (int i = 0; i < poly.state_dim(); ++i) out[i] = poly.transition[i].eval(x, w);
}

Vector step(const LinearSystem& s, const Vector& x, const Vector& w) {
    check_step_dims(s.state_dim(), s.noise_dim(), x, w);
    Vector out = s.a * x + s.b * w;
    check_finite_result(out);
    return out;
}

Vector step(const System& s, const Vector& x, const Vector& w) {
    check_step_dims(state_dim(s), noise_of(s).dim(), x, w);
    Vector out;
    step_into(s, x, w, out);
    check_finite_result(out);
    return out;
}

double TargetBall::distance(const Vector& x) const {
    const Vector d = x - center;
    if (weight) return linalg::weighted_norm(d, *weight);
    return d.norm();
}

TargetBall make_target(Vector center, double radius, std::optional<Matrix> weight) {
    require(center.size() > 0 && center.allFinite(), ErrorCode::InvalidArgument,
            "target: center must be a finite, non-empty vector");
    require(std::isfinite(radius) && radius > 0.0, ErrorCode::InvalidArgument,
            "target: radius must be positive");
    if (weight) {
        require(weight->rows() == center.size() && weight->cols() == center.size(),
                ErrorCode::DimensionMismatch, "target: weight matrix dimension mismatch");
        require(linalg::is_positive_definite(*weight), ErrorCode::InvalidArgument,
                "target: weight matrix must be symmetric positive definite");
    }
    return TargetBall{std::move(center), radius, std::move(weight)};
}

bool contains(const TargetBall& target, const Vector& x) {
    if (x.size() != target.center.size()) return false;
    return target.distance(x) < target.radius;
}

Region region_of(const TargetBall& target) {
    std::ostringstream os;
    os.precision(17);
    os << "open ball, center (" << target.center.transpose() << "), radius " << target.radius
       << (target.weight ? ", weighted norm" : ", euclidean norm");
    return {os.str(), [target](const Vector& x) { return contains(target, x); }};
}

}  // namespace reachcert
