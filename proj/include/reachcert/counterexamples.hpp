//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "reachcert/certificates.hpp"
#include "reachcert/system_model.hpp"
#include "reachcert/verifier.hpp"

namespace reachcert {

//---------------------------------------------------------------------------//
// Halving map: xi' = xi (1 + eta + w) / 2, eta' = eta / 2, w ~ U[-1, 1]
//---------------------------------------------------------------------------//

PolynomialSystem example1_system();

/// G = {0 < xi < 1, 0 < eta < 1}.
Region example1_target();

/// Start (2^i, 2^i u); eta crosses u at step k* = i.
struct Example1Instance {
    int i = 1;
    double u = 1.0;

    Vector x0() const;
    int crossing_time() const { return i; }
    /// Bounds on log2 xi_{k*}: i log2 u + i(i+1)/2 and i log2 u + i(i+3)/2.
    double lower() const;
    double upper() const;
};

struct LogState {
    double log2_xi = 0.0;
    double eta = 0.0;
};

/// (log2 xi_k, eta_k) for k = 0..k* from the product formula; needs k*
/// noise values in [-1, 1].
std::vector<LogState> example1_closed_form(const Example1Instance& inst,
                                           const std::vector<double>& noise);

/// One step of the map carried out on (log2 xi, eta).
LogState example1_log_step(const LogState& s, double w);

struct BoundCheck {
    Example1Instance instance;
    long long sequences = 0;
    long long violations = 0;
    double min_lower_margin = 0.0;  // min of log2 xi_{k*} - lower
    double min_upper_margin = 0.0;  // min of upper - log2 xi_{k*}
};

BoundCheck example1_check_bounds(const Example1Instance& inst, long long sequences,
                                 std::uint64_t seed);

/// V(xi, eta) = sum a[l][j] xi^l eta^j with l + j <= degree.
struct PolyCandidate {
    int degree = 0;
    std::vector<std::vector<double>> a;  // a[l][j], j <= degree - l

    static PolyCandidate zero(int degree);
    bool radially_unbounded() const;
    /// p_l(u) = sum_j a[l][j] u^j for the largest l whose p_l(u) != 0 is
    /// positive, and that l is > 0; i.e. V grows to +inf along eta = u.
    bool grows_along(double u) const;
    double eval(double xi, double eta) const;
};

/// Smallest i <= i_max where V(u^i 2^{i(i+1)/2}, u) > V(2^i, 2^i u), both
/// sides evaluated as signed sums in the log2 domain.
std::optional<int> refute_polynomial_drift(const PolyCandidate& candidate, double u, int i_max);

struct RefutationSweep {
    int degree = 0;
    double u = 1.0;
    bool exhaustive = false;
    long long generated = 0;
    long long skipped = 0;  // not growing along eta = u
    long long tested = 0;
    long long refuted = 0;
    int max_witness = 0;
    std::optional<PolyCandidate> first_unrefuted;
};

/// Candidates with integer coefficients in [-2, 2]; every combination when
/// `exhaustive`, otherwise `samples` random ones.
RefutationSweep refutation_sweep(int degree, double u, int i_max, bool exhaustive,
                                 long long samples, std::uint64_t seed);

/// V = ln(1 + xi) + eta^2, U = V - offset on the open positive quadrant.
std::unique_ptr<FunctionCertificate> example1_log_certificate(double offset);

inline constexpr double kExample1StatedOffset = 2.0;
/// ln(3/2): on {U <= 0} then xi <= 1/2 and eta^2 <= ln(3/2) < 1, so the
/// sublevel set lies inside G.
double example1_corrected_offset();

struct Example1CertificateReport {
    double offset = 0.0;
    double compact_radius = 0.0;
    ScanResult scan;
    DriftReport drift;
    DecreaseEstimate decrease;
    VariantReport variant;
    bool passed = false;
};

/// `samples` noise draws per drift test point.
Example1CertificateReport example1_verify_log_certificate(double offset, long long samples,
                                                          std::uint64_t seed);

//---------------------------------------------------------------------------//
// Random walk x' = x + w, w ~ U[-1, 1], G = (-2, 2)
//---------------------------------------------------------------------------//

LinearSystem example2_system();
TargetBall example2_target();

/// Exact E[V(Ax + Bw)] - V(x) for V(x) = x^T Q x + g^T x + c.
double exact_affine_quadratic_drift(const LinearSystem& system, const Matrix& q, const Vector& g,
                                    const Vector& x);

struct QuadraticProbe {
    double a = 0.0, b = 0.0, c = 0.0;
    double x = 0.0;
    double drift = 0.0;
};

/// V = |x|, U = |x| - 1, H(r) = r - 1, C = [-1, 1], with the given delta.
std::unique_ptr<FunctionCertificate> example2_abs_certificate(double delta);

struct Example2Report {
    std::vector<QuadraticProbe> probes;
    double max_abs_error = 0.0;  // |drift - a/3| over probes
    bool all_positive = false;
    double delta = 0.5;
    DriftReport drift;
    VariantReport variant;
    bool passed = false;
};

Example2Report example2_quadratic_failure(long long samples = 100000, std::uint64_t seed = 1);

}  // namespace reachcert
