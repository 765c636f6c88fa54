//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/classifier.hpp"

#include <cmath>
#include <sstream>

#include "reachcert/error.hpp"

namespace reachcert {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::ReachableStable: return "ReachableStable";
        case Outcome::ReachableCritical: return "ReachableCritical";
        case Outcome::NotReachableUnstable: return "NotReachableUnstable";
        case Outcome::NotReachableJordan: return "NotReachableJordan";
        case Outcome::NotReachableDimension: return "NotReachableDimension";
        case Outcome::InconclusiveAssumption: return "InconclusiveAssumption";
    }
    return "unknown";
}

const char* to_string(CertificateAdvice advice) {
    switch (advice) {
        case CertificateAdvice::Quadratic: return "quadratic";
        case CertificateAdvice::Logarithmic: return "logarithmic";
        case CertificateAdvice::Composite: return "composite";
        case CertificateAdvice::None: return "none";
    }
    return "unknown";
}

namespace {

BranchStep make_step(const char* key, const char* predicate, double value, double threshold,
                     bool result) {
    return {key, predicate, value, threshold, result};
}

}  // namespace

Verdict classify(const LinearSystem& system, const TargetBall& target,
                 const SpectralTolerances& tol) {
    const int n = system.state_dim();
    require(target.dim() == n, ErrorCode::DimensionMismatch,
            "classify: target dimension differs from the state dimension");
    require(contains(target, Vector::Zero(n)), ErrorCode::Precondition,
            "classify: the target set must contain the origin");

    Verdict v;
    v.spectrum = analyze(system.a, tol);
    const SpectralReport& s = v.spectrum;
    const double rho = s.rho;
    const double lo = 1.0 - tol.unit_tol, hi = 1.0 + tol.unit_tol;

    const bool stable = rho < lo;
    v.trace.push_back(make_step(branch::kStable, "rho < 1 - unit_tol", rho, lo, stable));
    if (stable) {
        v.outcome = Outcome::ReachableStable;
        v.advice = CertificateAdvice::Quadratic;
    } else {
        const bool unstable = rho > hi;
        v.trace.push_back(make_step(branch::kUnstable, "rho > 1 + unit_tol", rho, hi, unstable));
        if (unstable) {
            v.outcome = Outcome::NotReachableUnstable;
        } else {
            const bool jordan = s.d_max_unit >= 2;
            v.trace.push_back(make_step(branch::kJordan, "d_max_unit >= 2", s.d_max_unit, 2.0,
                                        jordan));
            if (jordan) {
                v.outcome = Outcome::NotReachableJordan;
            } else {
                v.rank_b = linalg::numerical_rank(system.b, tol.rank_tol);
                const int m = system.noise_dim();
                const bool full_rank = v.rank_b == n;
                const bool square = m == n;
                const bool moment = system.noise.third_moment_finite();
                v.trace.push_back(make_step(branch::kRankB, "rank(B) == n", v.rank_b, n,
                                            full_rank));
                v.trace.push_back(make_step(branch::kSquareB, "m == n", m, n, square));
                v.trace.push_back(make_step(branch::kMoment, "E||w||^3 < inf",
                                            moment ? 1.0 : 0.0, 1.0, moment));
                if (!(full_rank && square && moment)) {
                    v.outcome = Outcome::InconclusiveAssumption;
                } else {
                    const bool small = s.dim_ea <= 2;
                    v.trace.push_back(make_step(branch::kDimension, "dim_EA <= 2", s.dim_ea,
                                                2.0, small));
                    if (small) {
                        v.outcome = Outcome::ReachableCritical;
                        if (s.dim_ea == n) {
                            v.advice = CertificateAdvice::Logarithmic;
                        } else {
                            v.advice = CertificateAdvice::Composite;
                            v.verify_numerically = true;
                        }
                    } else {
                        v.outcome = Outcome::NotReachableDimension;
                    }
                }
            }
        }
    }

    const double gap = std::abs(rho - 1.0);
    const bool in_band = rho >= lo && rho <= hi;
    if ((in_band && gap > 0.5 * tol.unit_tol) || (!in_band && gap <= 10.0 * tol.unit_tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "near-critical: |rho - 1| = " << gap << " is close to unit_tol = " << tol.unit_tol;
        v.warnings.push_back(os.str());
    }
    if (s.ambiguous_clustering) {
        v.warnings.push_back("eigenvalue clustering is ambiguous at the chosen cluster_tol");
    }
    return v;
}

Outcome replay_trace(const std::vector<BranchStep>& trace) {
    std::size_t at = 0;
    auto next = [&](const char* key) -> bool {
        if (at >= trace.size() || trace[at].key != key) {
            fail(ErrorCode::Schema, std::string("branch trace: expected step '") + key + "'");
        }
        return trace[at++].result;
    };
    auto done = [&](Outcome o) {
        require(at == trace.size(), ErrorCode::Schema, "branch trace: trailing steps");
        return o;
    };
    if (next(branch::kStable)) return done(Outcome::ReachableStable);
    if (next(branch::kUnstable)) return done(Outcome::NotReachableUnstable);
    if (next(branch::kJordan)) return done(Outcome::NotReachableJordan);
    const bool rank = next(branch::kRankB);
    const bool square = next(branch::kSquareB);
    const bool moment = next(branch::kMoment);
    if (!(rank && square && moment)) return done(Outcome::InconclusiveAssumption);
    if (next(branch::kDimension)) return done(Outcome::ReachableCritical);
    return done(Outcome::NotReachableDimension);
}

}  // namespace reachcert
