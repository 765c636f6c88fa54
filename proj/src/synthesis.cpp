//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "reachcert/error.hpp"

namespace reachcert {

namespace {

void require_assumption(const LinearSystem& system, const SpectralTolerances& tol,
                        const char* what) {
    const int n = system.state_dim();
    if (linalg::numerical_rank(system.b, tol.rank_tol) != n || system.noise_dim() != n ||
        !system.noise.third_moment_finite()) {
        fail(ErrorCode::Precondition,
             std::string(what) + ": needs a square full-rank B and noise with a finite third moment");
    }
}

Matrix normalize_weight(Matrix q) {
    q = 0.5 * (q + q.transpose()).eval();
    return q / linalg::max_eigenvalue_sym(q);
}

bool isotropic_in(const Matrix& weight, const Matrix& noise_cov) {
    const Matrix r = linalg::sqrt_spd(weight);
    const Matrix s = r * noise_cov * r;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.transpose()));
    const auto& ev = es.eigenvalues();
    return ev.maxCoeff() <= (1.0 + 1e-9) * ev.minCoeff();
}

std::string scan_failure(const ScanResult& scan, double cap) {
    std::ostringstream os;
    os << "drift scan found no compact radius up to the cap " << cap;
    if (!scan.attempts.empty()) {
        const auto& last = scan.attempts.back();
        os << " (last shell " << last.radius << ": worst second-order drift + margin "
           << last.worst_second_order << ", worst Monte-Carlo upper bound "
           << last.worst_mc_upper << ")";
    }
    return os.str();
}

}  // namespace

Matrix noise_adapted_weight(const Matrix& a, const Matrix& noise_cov, const RealPlaneBasis& basis,
                            const SpectralReport& report) {
    const int n = static_cast<int>(a.rows());
    if (n != 2) return basis.q_star;
    const bool real = std::all_of(report.unit_eigs.begin(), report.unit_eigs.end(),
                                  [](const auto& c) { return c.value.imag() == 0.0; });
    if (!real || !linalg::is_positive_definite(noise_cov)) return basis.q_star;

    Matrix q;
    if (report.unit_eigs.size() == 1) {
        // A = +-I preserves every norm.
        q = noise_cov.inverse();
    } else {
        // Distinct +1 and -1: rescale each eigenvector independently.
        const Matrix pinv = basis.p.inverse();
        const Matrix sigma = pinv * noise_cov * pinv.transpose();
        Matrix p = basis.p;
        for (int k = 0; k < 2; ++k) p.col(k) *= std::sqrt(sigma(k, k));
        q = (p * p.transpose()).inverse();
    }
    q = normalize_weight(q);
    const Matrix defect = a.transpose() * q * a - q;
    if (defect.norm() > 1e-8 * (1.0 + q.norm())) return basis.q_star;
    return q;
}

QuadraticCertificate synthesize_quadratic(const LinearSystem& system, const TargetBall& target,
                                          const SpectralTolerances& tol) {
    const Matrix q = linalg::solve_discrete_lyapunov(system.a, tol.unit_tol);
    const double b = inner_variant_level(q, target);
    QuadraticCertificate cert(q, b);
    const Matrix bqb = system.b.transpose() * q * system.b;
    cert.alpha = 1.0;
    cert.set_compact_radius(std::sqrt((bqb * system.noise.covariance()).trace() / cert.alpha));
    cert.r0 = linalg::max_generalized_eigenvalue(system.a.transpose() * q * system.a, q);
    require(cert.r0 < 1.0, ErrorCode::IllConditioned, "synthesize_quadratic: r0 >= 1");
    cert.set_decrease((1.0 - cert.r0) * b);
    const double bnorm_sq = bqb.size() ? linalg::max_eigenvalue_sym(bqb) : 0.0;
    cert.noise_set_bound = bnorm_sq > 0.0 ? (1.0 - cert.r0) * b / bnorm_sq
                                          : std::numeric_limits<double>::infinity();
    return cert;
}

LogSynthesis synthesize_logarithmic(const LinearSystem& system, const TargetBall& target,
                                    const SynthesisOptions& options) {
    const int n = system.state_dim();
    const auto report = analyze(system.a, options.tol);
    if (!(report.dim_ea == n && n <= 2 && report.d_max_unit == 1)) {
        fail(ErrorCode::Precondition,
             "synthesize_logarithmic: needs every eigenvalue on the unit circle, simple "
             "Jordan blocks and n <= 2");
    }
    require_assumption(system, options.tol, "synthesize_logarithmic");

    auto basis = unit_plane_basis(system.a, report);
    const Matrix noise_cov = system.b * system.noise.covariance() * system.b.transpose();
    basis.q_star = noise_adapted_weight(system.a, noise_cov, basis, report);
    const double b = inner_variant_level(basis.q_star, target);

    LogCertificate cert(basis.q_star, b);
    if (!isotropic_in(basis.q_star, noise_cov)) {
        cert.add_note("noise covariance is anisotropic in the invariant norm");
    }
    ScanOptions scan_opts;
    scan_opts.start = cert.domain_threshold();
    scan_opts.cap = options.radius_cap;
    scan_opts.margin = options.margin;
    scan_opts.seed = options.seed;
    const System sys = system;
    auto scan = scan_compact_radius(sys, cert, scan_opts);
    if (!scan.found) fail(ErrorCode::NoCertificate, "synthesize_logarithmic: " + scan_failure(scan, options.radius_cap));
    cert.set_compact_radius(scan.radius);

    auto dec = estimate_decrease(sys, cert, default_variant_levels(cert), options.variant_points,
                                 options.variant_noise, options.seed + 1);
    cert.set_decrease(dec.delta);
    cert.set_probability(dec.epsilon);
    return {std::move(cert), std::move(basis), std::move(scan), std::move(dec)};
}

CompositeSynthesis synthesize_composite(const LinearSystem& system, const TargetBall& target,
                                        const SynthesisOptions& options) {
    const int n = system.state_dim();
    const auto report = analyze(system.a, options.tol);
    require(report.rho <= 1.0 + options.tol.unit_tol && report.d_max_unit <= 1,
            ErrorCode::Precondition,
            "synthesize_composite: needs rho(A) = 1 with simple unit Jordan blocks");
    require(report.dim_ea >= 1 && report.dim_ea <= 2, ErrorCode::Precondition,
            "synthesize_composite: needs 1 <= dim(E_A) <= 2");
    require(report.dim_ea < n, ErrorCode::Precondition,
            "synthesize_composite: no stable part; use the logarithmic certificate");
    require_assumption(system, options.tol, "synthesize_composite");

    const auto split = unit_invariant_split(system.a, report, options.tol);
    const int nu = split.unit_dim, ns = n - nu;
    const Matrix az = split.basis_inv * system.a * split.basis;
    const Matrix bz = split.basis_inv * system.b;
    const Matrix au = az.topLeftCorner(nu, nu);
    const Matrix as = az.bottomRightCorner(ns, ns);

    const auto report_u = analyze(au, options.tol);
    auto basis_u = unit_plane_basis(au, report_u);
    const Matrix bu = bz.topRows(nu);
    const Matrix noise_u = bu * system.noise.covariance() * bu.transpose();
    const Matrix q_star = noise_adapted_weight(au, noise_u, basis_u, report_u);
    const Matrix q = linalg::solve_discrete_lyapunov(as, options.tol.unit_tol);

    // b from the quadratic form of U + b in x coordinates.
    Matrix w = Matrix::Zero(n, n);
    w.topLeftCorner(nu, nu) = q_star;
    w.bottomRightCorner(ns, ns) = q;
    Matrix m = split.basis_inv.transpose() * w * split.basis_inv;
    m = 0.5 * (m + m.transpose()).eval();
    const double b = inner_variant_level(m, target);

    CompositeCertificate cert(split.basis, nu, q_star, q, b, options.form);
    const double coupling = (az.topRightCorner(nu, ns).norm() + az.bottomLeftCorner(ns, nu).norm());
    if (coupling > 1e-8 * (1.0 + az.norm())) {
        cert.add_note("invariant split leaves coupling between the parts");
    }

    ScanOptions scan_opts;
    scan_opts.start = std::numbers::e;
    scan_opts.cap = options.radius_cap;
    scan_opts.margin = options.margin;
    scan_opts.seed = options.seed;
    const System sys = system;
    auto scan = scan_compact_radius(sys, cert, scan_opts);
    if (scan.found) {
        cert.set_compact_radius(scan.radius);
    } else if (options.form == CompositeForm::Damped) {
        fail(ErrorCode::NoCertificate, "synthesize_composite: " + scan_failure(scan, options.radius_cap));
    } else {
        cert.set_compact_radius(scan_opts.start);
        cert.add_note(scan_failure(scan, options.radius_cap));
    }

    auto dec = estimate_decrease(sys, cert, default_variant_levels(cert), options.variant_points,
                                 options.variant_noise, options.seed + 1);
    cert.set_decrease(dec.delta);
    cert.set_probability(dec.epsilon);
    return {std::move(cert), std::move(scan), std::move(dec)};
}

}  // namespace reachcert
