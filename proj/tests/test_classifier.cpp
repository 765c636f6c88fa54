//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include <doctest.h>

#include <set>

#include "reachcert/classifier.hpp"
#include "reachcert/error.hpp"
#include "support.hpp"

using namespace reachcert;
using namespace reachcert::testing;

namespace {

/// Flattened verdict for byte-level comparisons.
std::string fingerprint(const Verdict& v) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(v.outcome) << '|' << to_string(v.advice) << '|' << v.rank_b << '|'
       << v.verify_numerically;
    for (const auto& s : v.trace) {
        os << '|' << s.key << ':' << s.value << ':' << s.threshold << ':' << s.result;
    }
    for (const auto& w : v.warnings) os << '|' << w;
    return os.str();
}

}  // namespace

TEST_CASE("classifier examples") {
    Matrix diag(2, 2);
    diag << 0.5, 0, 0, 0.9;
    const auto stable =
        classify(make_linear_system(diag, Matrix::Identity(2, 2), gaussian_identity(2)),
                 unit_ball(2));
    CHECK(stable.outcome == Outcome::ReachableStable);
    CHECK(stable.advice == CertificateAdvice::Quadratic);
    CHECK(stable.trace.size() == 1);
    CHECK(stable.trace[0].value == doctest::Approx(0.9).epsilon(1e-12));

    const auto walk = classify(make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                                                  uniform_unit(1)),
                               unit_ball(1, 2.0));
    CHECK(walk.outcome == Outcome::ReachableCritical);
    CHECK(walk.advice == CertificateAdvice::Logarithmic);
    CHECK(walk.trace.back().key == branch::kDimension);
    CHECK(walk.trace.back().value == 1.0);
    CHECK_FALSE(walk.verify_numerically);
}

TEST_CASE("regression matrix verdicts are exact and byte-stable") {
    for (const auto& c : regression_matrix()) {
        CAPTURE(c.name);
        const auto target = unit_ball(c.system.state_dim());
        const auto v = classify(c.system, target);
        CHECK(v.outcome == c.expected);
        CHECK(v.advice == c.advice);
        CHECK(replay_trace(v.trace) == v.outcome);
        CHECK(fingerprint(classify(c.system, target)) == fingerprint(v));
    }
    const auto again = regression_matrix();
    CHECK(again[0].system.a == regression_matrix()[0].system.a);
}

TEST_CASE("mixed spectrum asks for numerical verification") {
    Matrix a = Matrix::Identity(2, 2);
    a(1, 1) = 0.5;
    const auto v = classify(make_linear_system(a, Matrix::Identity(2, 2), gaussian_identity(2)),
                            unit_ball(2));
    CHECK(v.outcome == Outcome::ReachableCritical);
    CHECK(v.advice == CertificateAdvice::Composite);
    CHECK(v.verify_numerically);
}

TEST_CASE("classifier preconditions") {
    const auto sys = make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1), uniform_unit(1));
    CHECK_THROWS_AS(classify(sys, make_target(Vector::Constant(1, 5.0), 1.0)), Error);
    try {
        classify(sys, make_target(Vector::Constant(1, 5.0), 1.0));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Precondition);
    }
    CHECK_THROWS_AS(classify(sys, unit_ball(2)), Error);
}

TEST_CASE("near-critical band carries a warning") {
    SpectralTolerances tol;
    tol.unit_tol = 1e-6;
    const auto inside = classify(make_linear_system(Matrix::Constant(1, 1, 1.0 + 8e-7),
                                                    Matrix::Ones(1, 1), uniform_unit(1)),
                                 unit_ball(1), tol);
    CHECK(inside.outcome == Outcome::ReachableCritical);
    CHECK(inside.warnings.size() == 1);

    const auto outside = classify(make_linear_system(Matrix::Constant(1, 1, 1.0 + 3e-6),
                                                     Matrix::Ones(1, 1), uniform_unit(1)),
                                  unit_ball(1), tol);
    CHECK(outside.outcome == Outcome::NotReachableUnstable);
    CHECK(outside.warnings.size() == 1);

    const auto exact = classify(make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                                                   uniform_unit(1)),
                                unit_ball(1), tol);
    CHECK(exact.warnings.empty());
}

TEST_CASE("similarity invariance at safe margins") {
    std::mt19937_64 rng(7);
    for (const auto& c : regression_matrix()) {
        CAPTURE(c.name);
        const int n = c.system.state_dim();
        for (int rep = 0; rep < 5; ++rep) {
            const Matrix t = random_similarity(n, rng);
            const Matrix a = t * c.system.a * t.inverse();
            const Matrix b = t * c.system.b;
            const auto v = classify(make_linear_system(a, b, c.system.noise), unit_ball(n));
            CHECK(v.outcome == c.expected);
        }
    }
}

TEST_CASE("every input yields exactly one replayable outcome") {
    std::mt19937_64 rng(11);
    std::set<Outcome> seen;
    const std::vector<double> radii = {0.5, 0.99, 1.0, 1.01, 3.0};
    for (int n = 1; n <= 4; ++n) {
        for (double rho : radii) {
            for (int rep = 0; rep < 10; ++rep) {
                Matrix a = random_with_radius(n, rho, rng);
                if (rho == 1.0) {
                    // Unit and stable eigenvalues mixed, hidden by a similarity.
                    Vector d(n);
                    for (int i = 0; i < n; ++i) d(i) = (rng() % 3 == 0) ? 0.5 : (rng() % 2 ? 1.0 : -1.0);
                    d(0) = 1.0;
                    const Matrix t = random_similarity(n, rng);
                    a = t * d.asDiagonal() * t.inverse();
                }
                const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n + 1));
                const Matrix b = gaussian_matrix(n, m, rng);
                const auto v = classify(make_linear_system(a, b, gaussian_identity(m)),
                                        unit_ball(n));
                CHECK(replay_trace(v.trace) == v.outcome);
                if (v.outcome == Outcome::ReachableStable) CHECK(rho < 1.0);
                if (v.outcome == Outcome::NotReachableUnstable) CHECK(rho > 1.0);
                seen.insert(v.outcome);
            }
        }
    }
    CHECK(seen.count(Outcome::ReachableStable) == 1);
    CHECK(seen.count(Outcome::NotReachableUnstable) == 1);
}

TEST_CASE("replay rejects incomplete traces") {
    const auto v = classify(make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                                               uniform_unit(1)),
                            unit_ball(1));
    auto trace = v.trace;
    trace.pop_back();
    CHECK_THROWS_AS(replay_trace(trace), Error);
    trace = v.trace;
    trace.push_back(trace.back());
    CHECK_THROWS_AS(replay_trace(trace), Error);
    CHECK_THROWS_AS(replay_trace({}), Error);
}
