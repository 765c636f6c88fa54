//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include <doctest.h>

#include <cmath>
#include <limits>

#include "reachcert/error.hpp"
#include "reachcert/polynomial.hpp"
#include "reachcert/system_model.hpp"

using namespace reachcert;

TEST_CASE("uniform interval noise has second moment 1/3") {
    auto noise = NoiseModel::uniform_interval_product(Vector::Ones(1));
    auto draws = sample_noise(noise, {42, 0}, 1000000);
    REQUIRE(draws.size() == 1000000);
    double sum = 0.0, sq = 0.0;
    for (const auto& w : draws) {
        sum += w(0);
        sq += w(0) * w(0);
    }
    const double n = static_cast<double>(draws.size());
    CHECK(std::abs(sq / n - 1.0 / 3.0) < 0.01 / 3.0);
    // 5 sigma on the mean, sigma^2 = 1/3.
    CHECK(std::abs(sum / n) < 5.0 * std::sqrt(1.0 / 3.0) / 1000.0);
    CHECK(noise.covariance()(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("sample_noise with zero count") {
    auto noise = NoiseModel::gaussian(Matrix::Identity(2, 2));
    CHECK(sample_noise(noise, {1, 2}, 0).empty());
    CHECK_THROWS_AS(sample_noise(noise, {1, 2}, -1), Error);
}

TEST_CASE("gaussian noise covariance converges") {
    Matrix cov(2, 2);
    cov << 2.0, 0.5, 0.5, 1.0;
    for (const Matrix& target : {Matrix(Matrix::Identity(2, 2)), cov}) {
        auto noise = NoiseModel::gaussian(target);
        const long long n = 1000000;
        auto draws = sample_noise(noise, {7, 3}, n);
        Matrix emp = Matrix::Zero(2, 2);
        Vector mean = Vector::Zero(2);
        for (const auto& w : draws) {
            emp += w * w.transpose();
            mean += w;
        }
        emp /= static_cast<double>(n);
        mean /= static_cast<double>(n);
        CHECK((emp - target).norm() <= 0.02 * target.norm());
        CHECK((emp - target).norm() <= 5.0 * target.norm() / std::sqrt(double(n)) * 2.0);
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(mean(i)) < 5.0 * std::sqrt(target(i, i)) / 1000.0);
        }
    }
}

TEST_CASE("noise draws are reproducible and seed dependent") {
    auto noise = NoiseModel::uniform_box(Vector::Constant(3, 0.5));
    auto a = sample_noise(noise, {99, 4}, 100);
    auto b = sample_noise(noise, {99, 4}, 100);
    auto c = sample_noise(noise, {99, 5}, 100);
    bool all_equal = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        all_equal = all_equal && a[i] == b[i];
        differs = differs || a[i] != c[i];
        CHECK(a[i].cwiseAbs().maxCoeff() <= 0.5);
    }
    CHECK(all_equal);
    CHECK(differs);
}

TEST_CASE("invalid noise parameters") {
    Matrix ind(2, 2);
    ind << 1, 2, 2, 1;
    CHECK_THROWS_AS(NoiseModel::gaussian(ind), Error);
    CHECK_THROWS_AS(NoiseModel::uniform_interval_product(Vector::Constant(2, -1.0)), Error);
    CHECK_THROWS_AS(NoiseModel::uniform_box(Eigen::Vector2d(1.0, 2.0)), Error);
}

TEST_CASE("linear step") {
    auto sys = make_linear_system(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                  NoiseModel::gaussian(Matrix::Identity(2, 2)));
    Vector x = Eigen::Vector2d(1, 0);
    Vector w = Eigen::Vector2d(0, 1);
    CHECK(step(sys, x, w) == Eigen::Vector2d(1, 1));

    auto scalar = make_linear_system(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0),
                                     NoiseModel::uniform_interval_product(Vector::Ones(1)));
    CHECK(step(scalar, Vector::Constant(1, 10.0), Vector::Constant(1, 0.5))(0) == 20.5);

    CHECK_THROWS_AS(step(sys, Vector::Zero(3), w), Error);
    CHECK_THROWS_AS(step(scalar, Vector::Constant(1, 1e308), Vector::Zero(1)), Error);
}

TEST_CASE("linear step is affine in the noise") {
    Matrix a(2, 2), b(2, 2);
    a << 0.3, -1.2, 0.7, 0.9;
    b << 1.0, 0.5, -0.25, 2.0;
    auto sys = make_linear_system(a, b, NoiseModel::gaussian(Matrix::Identity(2, 2)));
    Vector x = Eigen::Vector2d(0.4, -2.0);
    Vector w1 = Eigen::Vector2d(0.1, 0.7), w2 = Eigen::Vector2d(-1.5, 0.2);
    Vector lhs = step(sys, x, w1) + step(sys, x, w2) - 2.0 * step(sys, x, Vector::Zero(2));
    CHECK((lhs - b * (w1 + w2)).norm() < 1e-14);
}

TEST_CASE("polynomial transition of the halving map") {
    auto noise = NoiseModel::uniform_interval_product(Vector::Ones(1));
    System sys = make_polynomial_system({"0.5*x1*(1 + x2 + w1)", "0.5*x2"}, noise);
    Vector out = step(sys, Eigen::Vector2d(2, 2), Vector::Zero(1));
    CHECK(out == Eigen::Vector2d(3, 1));
    out = step(sys, Eigen::Vector2d(6, 0), Vector::Zero(1));
    CHECK(out == Eigen::Vector2d(3, 0));
    Vector x = Eigen::Vector2d(1, 5);
    for (int k = 1; k <= 10; ++k) {
        x = step(sys, x, Vector::Zero(1));
        CHECK(x(1) == 5.0 / std::pow(2.0, k));
    }
}

TEST_CASE("polynomial parser") {
    auto p = Polynomial::parse("x1^2 - 3*x2 + w1*(2.5e-1) - -1", 2, 1);
    CHECK(p.eval(Eigen::Vector2d(3, 1), Vector::Constant(1, 4.0)) == doctest::Approx(8.0));
    auto q = Polynomial::parse("−x1", 1, 0);
    CHECK(q.eval(Vector::Constant(1, 2.0), Vector()) == -2.0);
    CHECK_THROWS_AS(Polynomial::parse("x3", 2, 1), Error);
    CHECK_THROWS_AS(Polynomial::parse("x1 +", 1, 0), Error);
    CHECK_THROWS_AS(Polynomial::parse("(x1", 1, 0), Error);
    CHECK_THROWS_AS(Polynomial::parse("x1 ^ 0.5", 1, 0), Error);
}

TEST_CASE("target membership is strict") {
    auto g = make_target(Vector::Zero(1), 2.0);
    CHECK(contains(g, Vector::Constant(1, 1.999)));
    CHECK(contains(g, Vector::Zero(1)));
    CHECK_FALSE(contains(g, Vector::Constant(1, 2.0)));
    CHECK_FALSE(contains(g, Vector::Constant(1, -2.0)));

    Matrix w = Eigen::Vector2d(4, 1).asDiagonal();
    auto gw = make_target(Vector::Zero(2), 2.0, w);
    CHECK(contains(gw, Eigen::Vector2d(0.9, 0)));
    CHECK_FALSE(contains(gw, Eigen::Vector2d(1.0, 0)));

    CHECK_THROWS_AS(make_target(Vector::Zero(1), 0.0), Error);
    CHECK_THROWS_AS(make_target(Vector::Zero(1), 1.0, Matrix::Constant(1, 1, -1.0)), Error);
}
