//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "reachcert/error.hpp"
#include "reachcert/parallel.hpp"

namespace reachcert {

namespace {

int default_shell_points(int n) { return n <= 3 ? 64 : 256; }

double checked_value(const ScalarField& v, const Vector& y, const char* what) {
    const double value = v(y);
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": V is not finite at successor (" << y.transpose() << ")";
        fail(ErrorCode::NonFinite, os.str());
    }
    return value;
}

}  // namespace

double exact_quadratic_drift(const LinearSystem& system, const Matrix& q, const Vector& x) {
    const int n = system.state_dim();
    require(q.rows() == n && q.cols() == n && x.size() == n, ErrorCode::DimensionMismatch,
            "exact_quadratic_drift: dimension mismatch");
    const Matrix gain = system.a.transpose() * q * system.a - q;
    const double noise =
        (system.b.transpose() * q * system.b * system.noise.covariance()).trace();
    return x.dot(gain * x) + noise;
}

McEstimate mc_drift(const System& system, const ScalarField& v, const Vector& x,
                    long long samples, TrajectorySeed seed, bool antithetic) {
    require(samples >= 100, ErrorCode::InvalidArgument, "mc_drift: at least 100 samples");
    require(x.size() == state_dim(system), ErrorCode::DimensionMismatch,
            "mc_drift: state dimension mismatch");
    const double v0 = v(x);
    require(std::isfinite(v0), ErrorCode::NonFinite, "mc_drift: V(x) is not finite");
    const NoiseModel& noise = noise_of(system);
    RandomStream rng(seed);
    Vector w(noise.dim()), y(x.size()), neg(noise.dim());

    const long long draws = antithetic ? samples / 2 : samples;
    double mean = 0.0, m2 = 0.0;
    for (long long k = 0; k < draws; ++k) {
        noise.draw(rng, w);
        step_into(system, x, w, y);
        double d = checked_value(v, y, "mc_drift");
        if (antithetic) {
            neg = -w;
            step_into(system, x, neg, y);
            d = 0.5 * (d + checked_value(v, y, "mc_drift"));
        }
        d -= v0;
        // Welford update.
        const double delta = d - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (d - mean);
    }
    const double var = draws > 1 ? m2 / static_cast<double>(draws - 1) : 0.0;
    return {mean, 3.0 * std::sqrt(var / static_cast<double>(draws)),
            antithetic ? 2 * draws : draws};
}

double second_order_drift(const System& system, const ScalarField& v, const Vector& x) {
    const NoiseModel& noise = noise_of(system);
    Eigen::SelfAdjointEigenSolver<Matrix> es(noise.covariance());
    const Vector zero = Vector::Zero(noise.dim());
    const double g0 = v(step(system, x, zero));
    double est = g0 - v(x);
    for (int k = 0; k < noise.dim(); ++k) {
        const Vector s = std::sqrt(std::max(es.eigenvalues()(k), 0.0)) * es.eigenvectors().col(k);
        est += 0.5 * (v(step(system, x, s)) + v(step(system, x, Vector(-s))) - 2.0 * g0);
    }
    return est;
}

DriftPlan default_drift_plan(const Certificate& cert, std::uint64_t seed) {
    DriftPlan plan;
    const double base = cert.compact_radius() > 0.0 ? cert.compact_radius() : 1.0;
    for (int j = 0; j <= 6; ++j) plan.radii.push_back(base * std::ldexp(1.0, j));
    plan.points_per_shell = default_shell_points(cert.dim());
    plan.seed = seed;
    return plan;
}

DriftReport verify_drift(const System& system, const Certificate& cert, const DriftPlan& plan) {
    require(cert.dim() == state_dim(system), ErrorCode::DimensionMismatch,
            "verify_drift: certificate dimension differs from the system");
    require(!plan.radii.empty() && plan.points_per_shell > 0, ErrorCode::InvalidArgument,
            "verify_drift: empty plan");
    for (double r : plan.radii) {
        if (!(r >= cert.compact_radius() * (1.0 - 1e-12))) {
            std::ostringstream os;
            os << "verify_drift: shell radius " << r << " lies inside the compact set (radius "
               << cert.compact_radius() << ")";
            fail(ErrorCode::InvalidArgument, os.str());
        }
    }

    DriftReport rep;
    rep.plan = plan;
    const LinearSystem* linear = std::get_if<LinearSystem>(&system);
    rep.exact = linear != nullptr && cert.quadratic_form() != nullptr;
    if (!rep.exact) {
        require(plan.noise_samples >= 100, ErrorCode::InvalidArgument,
                "verify_drift: at least 100 noise samples per point");
    }
    const ScalarField v = [&cert](const Vector& x) { return cert.drift(x); };

    const std::size_t per_shell = static_cast<std::size_t>(plan.points_per_shell);
    const std::size_t total = plan.radii.size() * per_shell;
    std::vector<Vector> xs(total);
    std::vector<McEstimate> est(total);
    std::vector<double> values(total);
    const TrajectorySeed root{plan.seed, 0};
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t shell = idx / per_shell;
        RandomStream rng(root.child(idx));
        xs[idx] = cert.shell_point(plan.radii[shell], rng);
        values[idx] = cert.drift(xs[idx]);
        if (rep.exact) {
            est[idx] = {exact_quadratic_drift(*linear, *cert.quadratic_form(), xs[idx]), 0.0, 0};
        } else {
            est[idx] = mc_drift(system, v, xs[idx], plan.noise_samples,
                                root.child(idx).child(1));
        }
    });

    for (std::size_t s = 0; s < plan.radii.size(); ++s) {
        ShellResult shell;
        shell.radius = plan.radii[s];
        shell.points = plan.points_per_shell;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < per_shell; ++i) {
            const std::size_t idx = s * per_shell + i;
            const auto& e = est[idx];
            const double lower = e.mean - e.half_width;
            if (lower > plan.tolerance * (1.0 + std::abs(values[idx]))) {
                ++shell.violations;
                rep.violations.push_back({xs[idx], e.mean, e.half_width});
            }
            if (lower > worst) {
                worst = lower;
                shell.worst_estimate = e.mean;
                shell.worst_half_width = e.half_width;
                shell.worst_x = xs[idx];
            }
        }
        rep.shells.push_back(std::move(shell));
    }
    rep.passed = rep.violations.empty();
    return rep;
}

VariantSamples sample_variant_level(const System& system, const Certificate& cert, double level,
                                    int points, int noise_per_point, TrajectorySeed seed,
                                    long long max_proposals) {
    require(points > 0 && noise_per_point > 0, ErrorCode::InvalidArgument,
            "variant sampling: counts must be positive");
    require(cert.dim() == state_dim(system), ErrorCode::DimensionMismatch,
            "variant sampling: certificate dimension differs from the system");
    VariantSamples out;
    out.level = level;
    RandomStream rng(seed.child(0));
    Vector x(cert.dim());
    while (static_cast<int>(out.points.size()) < points && out.proposals < max_proposals) {
        const double volume = cert.propose_in_sublevel(level, rng, x);
        if (!(volume > 0.0)) {
            std::ostringstream os;
            os << "variant sampling: level " << level << " is below the minimum of V ("
               << cert.drift_floor() << "); the sample region is empty";
            fail(ErrorCode::InsufficientData, os.str());
        }
        ++out.proposals;
        if (cert.drift(x) <= level && cert.variant(x) > 0.0) out.points.push_back(x);
    }
    if (static_cast<int>(out.points.size()) < points) {
        std::ostringstream os;
        os << "variant sampling: only " << out.points.size() << " of " << points
           << " points accepted in " << out.proposals << " proposals at level " << level
           << " (acceptance " << static_cast<double>(out.points.size()) / out.proposals
           << (static_cast<double>(out.points.size()) < 1e-6 * out.proposals
                   ? ", below 1e-6)"
                   : ")");
        fail(ErrorCode::InsufficientData, os.str());
    }

    const double bound = cert.variant_bound(level);
    for (const auto& p : out.points) {
        const double u = cert.variant(p);
        out.max_u_minus_h = std::max(out.max_u_minus_h, u - bound);
        if (!(u <= bound)) ++out.h_violations;
    }

    const NoiseModel& noise = noise_of(system);
    out.decrease.resize(points, noise_per_point);
    parallel_for(static_cast<std::size_t>(points), [&](std::size_t i) {
        RandomStream nrng(seed.child(i + 1));
        Vector w(noise.dim()), y(cert.dim());
        const double u0 = cert.variant(out.points[i]);
        for (int k = 0; k < noise_per_point; ++k) {
            noise.draw(nrng, w);
            step_into(system, out.points[i], w, y);
            out.decrease(static_cast<Eigen::Index>(i), k) = u0 - cert.variant(y);
        }
    });
    return out;
}

namespace {

double half_min_best_decrease(const VariantSamples& s) {
    return 0.5 * s.decrease.rowwise().maxCoeff().minCoeff();
}

double pooled_frequency(const VariantSamples& s, double delta) {
    return static_cast<double>((s.decrease.array() >= delta).count()) /
           static_cast<double>(s.decrease.size());
}

}  // namespace

VariantReport verify_variant(const System& system, const Certificate& cert, const Region& target,
                             const VariantPlan& plan) {
    require(!plan.levels.empty(), ErrorCode::InvalidArgument, "verify_variant: no levels");
    require(static_cast<bool>(target.contains), ErrorCode::InvalidArgument,
            "verify_variant: target region missing");
    VariantReport rep;
    rep.delta = plan.delta.value_or(cert.decrease());
    require(std::isfinite(rep.delta) && rep.delta > 0.0, ErrorCode::InvalidArgument,
            "verify_variant: the certificate must state a positive decrease delta");
    rep.region = target.description;

    const TrajectorySeed root{plan.seed, 0};
    bool ok = true;
    for (std::size_t j = 0; j < plan.levels.size(); ++j) {
        const auto s = sample_variant_level(system, cert, plan.levels[j], plan.points_per_level,
                                            plan.noise_per_point, root.child(j + 1),
                                            plan.max_proposals);
        VariantLevel lv;
        lv.level = plan.levels[j];
        lv.points = static_cast<int>(s.points.size());
        lv.proposals = s.proposals;
        lv.acceptance = static_cast<double>(lv.points) / static_cast<double>(s.proposals);
        lv.delta_hat = half_min_best_decrease(s);
        lv.epsilon_hat = pooled_frequency(s, rep.delta);
        lv.epsilon_sigma = std::sqrt(lv.epsilon_hat * (1.0 - lv.epsilon_hat) /
                                     static_cast<double>(s.decrease.size()));
        const Vector per_point =
            (s.decrease.array() >= rep.delta).cast<double>().rowwise().mean();
        Eigen::Index worst = 0;
        lv.worst_point_fraction = per_point.minCoeff(&worst);
        lv.worst_x = s.points[static_cast<std::size_t>(worst)];
        lv.h_violations = s.h_violations;
        lv.max_u_minus_h = s.max_u_minus_h;
        ok = ok && lv.epsilon_hat - 3.0 * lv.epsilon_sigma > 0.0 && lv.h_violations == 0;
        rep.levels.push_back(std::move(lv));
    }

    RandomStream brng(root.child(0));
    rep.inclusion_points = plan.boundary_points;
    for (int k = 0; k < plan.boundary_points; ++k) {
        const Vector p = cert.variant_zero_point(brng);
        if (!target.contains(p)) {
            if (!rep.inclusion_witness) rep.inclusion_witness = p;
            ++rep.inclusion_violations;
        }
    }
    rep.passed = ok && rep.inclusion_violations == 0;
    return rep;
}

std::vector<double> default_variant_levels(const Certificate& cert) {
    const std::vector<double> scale = {1.0, 1.25, 1.5};
    std::vector<double> levels;
    switch (cert.kind()) {
        case CertificateKind::Quadratic: {
            const auto& q = static_cast<const QuadraticCertificate&>(cert);
            const double rc = cert.compact_radius();
            const double base =
                std::max(2.0 * q.b(), linalg::max_eigenvalue_sym(q.q()) * rc * rc);
            for (double f : {1.0, 2.0, 4.0}) levels.push_back(base * f);
            return levels;
        }
        case CertificateKind::Logarithmic:
        case CertificateKind::Composite: {
            // V grows like sqrt(ln ||z_u||_*), so the unit part sets the scale.
            double reach = std::max(cert.compact_radius(), std::exp(1.0));
            if (cert.kind() == CertificateKind::Logarithmic) {
                const auto& l = static_cast<const LogCertificate&>(cert);
                reach = std::max({reach, 2.0 * std::sqrt(l.b()), l.domain_threshold()});
            } else {
                const auto& c = static_cast<const CompositeCertificate&>(cert);
                reach = std::max(reach, 2.0 * std::sqrt(c.b()));
            }
            const double base = std::sqrt(std::log(reach));
            for (double f : scale) levels.push_back(base * f);
            return levels;
        }
        default: break;
    }
    // Largest V seen on the shell that bounds C.
    RandomStream rng(TrajectorySeed{0x5eed, 0});
    const double reach = std::max(cert.compact_radius(), 1.0);
    double base = cert.drift_floor();
    for (int k = 0; k < 64; ++k) base = std::max(base, cert.drift(cert.shell_point(reach, rng)));
    for (double f : scale) levels.push_back(base * f);
    return levels;
}

DecreaseEstimate estimate_decrease(const System& system, const Certificate& cert,
                                   const std::vector<double>& levels, int points,
                                   int noise_per_point, std::uint64_t seed) {
    require(!levels.empty(), ErrorCode::InvalidArgument, "estimate_decrease: no levels");
    DecreaseEstimate out;
    out.levels = levels;
    std::vector<VariantSamples> samples;
    const TrajectorySeed root{seed, 0};
    out.delta = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < levels.size(); ++j) {
        samples.push_back(sample_variant_level(system, cert, levels[j], points, noise_per_point,
                                               root.child(j + 1), 20000000));
        out.level_delta.push_back(half_min_best_decrease(samples.back()));
        out.delta = std::min(out.delta, out.level_delta.back());
    }
    if (!(out.delta > 0.0)) {
        fail(ErrorCode::NoCertificate,
             "estimate_decrease: some sampled point admits no decrease of U");
    }
    out.epsilon = 1.0;
    for (const auto& s : samples) {
        out.level_epsilon.push_back(pooled_frequency(s, out.delta));
        out.epsilon = std::min(out.epsilon, out.level_epsilon.back());
    }
    return out;
}

ScanResult scan_compact_radius(const System& system, const Certificate& cert,
                               const ScanOptions& options) {
    require(options.cap > 0.0 && options.margin >= 0.0, ErrorCode::InvalidArgument,
            "scan: invalid options");
    const int points = options.points > 0 ? options.points : default_shell_points(cert.dim());
    const ScalarField v = [&cert](const Vector& x) { return cert.drift(x); };
    ScanResult out;
    double radius = options.start > 0.0 ? options.start : std::max(cert.compact_radius(), 1.0);
    const TrajectorySeed root{options.seed, 0};
    for (std::uint64_t attempt = 0; radius <= options.cap; ++attempt, radius *= 2.0) {
        std::vector<double> so(points), mc(points), val(points);
        const TrajectorySeed aseed = root.child(attempt);
        parallel_for(static_cast<std::size_t>(points), [&](std::size_t i) {
            RandomStream rng(aseed.child(i));
            const Vector x = cert.shell_point(radius, rng);
            val[i] = cert.drift(x);
            so[i] = second_order_drift(system, v, x) + options.margin * std::abs(val[i]);
            // Refine while the interval straddles zero.
            const double tol = 1e-9 * (1.0 + std::abs(val[i]));
            long long n = options.mc_samples;
            for (std::uint64_t round = 1;; ++round, n *= 4) {
                const auto e = mc_drift(system, v, x, n, aseed.child(i).child(round));
                mc[i] = e.mean + e.half_width - tol;
                if (mc[i] <= 0.0 || e.mean - e.half_width > tol ||
                    4 * n > options.mc_max_samples) {
                    break;
                }
            }
        });
        ScanAttempt a;
        a.radius = radius;
        a.worst_second_order = *std::max_element(so.begin(), so.end());
        a.worst_mc_upper = *std::max_element(mc.begin(), mc.end());
        a.passed = a.worst_second_order <= 0.0 && a.worst_mc_upper <= 0.0;
        out.attempts.push_back(a);
        if (a.passed) {
            out.radius = radius;
            out.found = true;
            break;
        }
    }
    return out;
}

}  // namespace reachcert
