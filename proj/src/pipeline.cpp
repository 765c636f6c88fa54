//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/pipeline.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "reachcert/error.hpp"

namespace reachcert::pipeline {

namespace {

using io::Json;

const LinearSystem& require_linear(const io::SystemFile& file, const char* command) {
    const auto* lin = std::get_if<LinearSystem>(&file.system);
    if (!lin) {
        fail(ErrorCode::Precondition,
             std::string(command) + " requires a linear system (kind \"linear\")");
    }
    return *lin;
}

long long or_default(long long value, long long fallback) {
    return value > 0 ? value : fallback;
}

Json tolerances_json(const SpectralTolerances& tol) {
    return {{"unit_tol", tol.unit_tol}, {"rank_tol", tol.rank_tol}, {"cluster_tol", tol.cluster_tol}};
}

Json verification(const System& system, const Certificate& cert, const TargetBall& target,
                  const Settings& settings, bool& passed) {
    if (cert.dim() != state_dim(system)) {
        fail(ErrorCode::DimensionMismatch, "certificate dimension " + std::to_string(cert.dim()) +
                                               " does not match system dimension " +
                                               std::to_string(state_dim(system)));
    }
    DriftPlan dplan = default_drift_plan(cert, settings.seed);
    if (settings.samples > 0) dplan.noise_samples = settings.samples;
    const auto drift = verify_drift(system, cert, dplan);

    VariantPlan vplan;
    vplan.levels = default_variant_levels(cert);
    vplan.seed = settings.seed;
    const auto variant = verify_variant(system, cert, region_of(target), vplan);

    passed = drift.passed && variant.passed;
    Json j;
    j["drift"] = io::to_json(drift);
    j["variant"] = io::to_json(variant);
    j["passed"] = passed;
    return j;
}

}  // namespace

Vector default_x0(int dim) {
    Vector x = Vector::Zero(dim);
    x(0) = 10.0;
    return x;
}

TargetBall resolve_target(const io::SystemFile& file, const Settings& settings,
                          const std::optional<TargetBall>& recorded) {
    const int n = state_dim(file.system);
    TargetBall t = recorded ? *recorded : file.target ? *file.target : make_target(Vector::Zero(n), 1.0);
    if (settings.target_radius) t.radius = *settings.target_radius;
    if (settings.target_center) {
        if (settings.target_center->size() != n) {
            fail(ErrorCode::DimensionMismatch,
                 "target center has " + std::to_string(settings.target_center->size()) +
                     " entries, expected " + std::to_string(n));
        }
        t.center = *settings.target_center;
    }
    return make_target(t.center, t.radius, t.weight);
}

io::Json certificate_json(const Certificate& cert, const TargetBall& target) {
    Json j = io::to_json(cert);
    j["target"] = io::to_json(target);
    return j;
}

std::optional<TargetBall> recorded_target(const io::Json& certificate, int dim) {
    const auto it = certificate.find("target");
    if (it == certificate.end() || it->is_null()) return std::nullopt;
    return io::parse_target(*it, dim);
}

Result classify(const io::SystemFile& file, const Settings& settings) {
    const auto& lin = require_linear(file, "classify");
    const TargetBall target = resolve_target(file, settings);
    const Verdict v = reachcert::classify(lin, target, settings.tol);
    Result r;
    r.report["tolerances"] = tolerances_json(settings.tol);
    r.report["target"] = io::to_json(target);
    r.report["verdict"] = io::to_json(v);
    return r;
}

Result certify(const io::SystemFile& file, const Settings& settings) {
    const auto& lin = require_linear(file, "certify");
    const TargetBall target = resolve_target(file, settings);
    const Verdict v = reachcert::classify(lin, target, settings.tol);

    Result r;
    r.report["tolerances"] = tolerances_json(settings.tol);
    r.report["target"] = io::to_json(target);
    r.report["verdict"] = io::to_json(v);

    SynthesisOptions opts;
    opts.tol = settings.tol;
    opts.seed = settings.seed;
    Json synthesis;
    switch (v.advice) {
        case CertificateAdvice::Quadratic: {
            auto cert = std::make_unique<QuadraticCertificate>(
                synthesize_quadratic(lin, target, settings.tol));
            synthesis["method"] = "discrete Lyapunov equation";
            r.certificate = std::move(cert);
            break;
        }
        case CertificateAdvice::Logarithmic: {
            auto s = synthesize_logarithmic(lin, target, opts);
            synthesis["method"] = "invariant weighted norm, scanned compact radius";
            synthesis["scan"] = io::to_json(s.scan);
            synthesis["decrease"] = io::to_json(s.decrease);
            r.certificate = std::make_unique<LogCertificate>(std::move(s.certificate));
            break;
        }
        case CertificateAdvice::Composite: {
            auto s = synthesize_composite(lin, target, opts);
            synthesis["method"] = "invariant splitting, scanned compact radius";
            synthesis["scan"] = io::to_json(s.scan);
            synthesis["decrease"] = io::to_json(s.decrease);
            r.certificate = std::make_unique<CompositeCertificate>(std::move(s.certificate));
            break;
        }
        case CertificateAdvice::None:
            fail(ErrorCode::NoCertificate,
                 std::string("no certificate exists for ") + to_string(v.outcome));
    }
    r.report["synthesis"] = synthesis;

    bool passed = false;
    r.report["verification"] = verification(file.system, *r.certificate, target, settings, passed);
    if (auto* c = dynamic_cast<CompositeCertificate*>(r.certificate.get())) c->verified = passed;
    r.report["certificate"] = certificate_json(*r.certificate, target);
    r.passed = passed;
    return r;
}

Result verify(const io::SystemFile& file, const Certificate& cert,
              const std::optional<TargetBall>& recorded, const Settings& settings) {
    const TargetBall target = resolve_target(file, settings, recorded);
    Result r;
    r.report["target"] = io::to_json(target);
    r.report["certificate"] = io::to_json(cert);
    bool passed = false;
    r.report["verification"] = verification(file.system, cert, target, settings, passed);
    r.passed = passed;
    return r;
}

Result simulate(const io::SystemFile& file, const Settings& settings) {
    const int n = state_dim(file.system);
    const Vector x0 = settings.x0 ? *settings.x0 : default_x0(n);
    if (x0.size() != n) {
        fail(ErrorCode::DimensionMismatch, "x0 has " + std::to_string(x0.size()) +
                                               " entries, expected " + std::to_string(n));
    }
    const TargetBall target = resolve_target(file, settings);
    const long long traj = or_default(settings.trajectories, kDefaultTrajectories);
    const long long horizon = or_default(settings.horizon, kDefaultHorizon);
    const auto stats = hitting_stats(file.system, target, x0, traj, horizon, settings.seed);
    Result r;
    r.report["target"] = io::to_json(target);
    r.report["x0"] = io::vector_json(x0);
    r.report["ensemble"] = io::to_json(stats);
    return r;
}

std::string trajectory_csv(const System& system, const Vector& x0, long long horizon,
                           std::uint64_t seed) {
    const auto t = simulate(system, x0, horizon, {seed, 0});
    std::ostringstream os;
    os << std::setprecision(17);
    os << "k";
    for (Eigen::Index i = 0; i < x0.size(); ++i) os << ",x" << (i + 1);
    os << "\n";
    for (std::size_t k = 0; k < t.states.size(); ++k) {
        os << k;
        for (Eigen::Index i = 0; i < t.states[k].size(); ++i) os << "," << t.states[k](i);
        os << "\n";
    }
    return os.str();
}

namespace {

Result repro_example1_bounds(const Settings& s) {
    const long long sequences = or_default(s.samples, 100000);
    const System sys = example1_system();
    Result r;

    // Product formula against direct iteration of the map.
    double max_error = 0.0;
    for (int i = 1; i <= 10; ++i) {
        for (double u : {1.0, 2.0}) {
            const Example1Instance inst{i, u};
            RandomStream rng({s.seed, static_cast<std::uint64_t>(i * 10 + static_cast<int>(u))});
            std::vector<double> noise(static_cast<std::size_t>(i));
            for (auto& w : noise) w = rng.uniform(-1.0, 1.0);
            const auto cf = example1_closed_form(inst, noise);
            Vector x = inst.x0();
            Vector w(1);
            for (int k = 0; k <= i; ++k) {
                const auto idx = static_cast<std::size_t>(k);
                max_error = std::max(max_error, std::abs(cf[idx].log2_xi - std::log2(x(0))));
                if (k < i) {
                    w(0) = noise[idx];
                    x = step(sys, x, w);
                }
            }
        }
    }
    r.report["closed_form_vs_simulation"] = {
        {"i_max", 10}, {"u", {1.0, 2.0}}, {"max_abs_log2_error", max_error}, {"tolerance", 1e-8}};

    Json checks = Json::array();
    bool ok = max_error <= 1e-8;
    for (int i : {3, 4, 5}) {
        for (double u : {1.0, 2.0}) {
            const auto c = example1_check_bounds({i, u}, sequences, s.seed);
            ok = ok && c.violations == 0;
            checks.push_back(io::to_json(c));
        }
    }
    r.report["bounds"] = checks;
    r.passed = ok;
    return r;
}

Result repro_example1_certificate(const Settings& s) {
    const long long samples = or_default(s.samples, 4096);
    const auto stated = example1_verify_log_certificate(kExample1StatedOffset, samples, s.seed);
    const auto corrected =
        example1_verify_log_certificate(example1_corrected_offset(), samples, s.seed);
    Result r;
    r.report["certificate"] = {{"V", "ln(1 + xi) + eta^2"},
                               {"U", "V - offset"},
                               {"H", "r - offset"},
                               {"domain", "xi > 0, eta > 0"}};
    r.report["stated_offset"] = io::to_json(stated);
    r.report["corrected_offset"] = io::to_json(corrected);
    r.passed = corrected.passed;
    return r;
}

Result repro_example1_refute(const Settings& s) {
    const long long samples = or_default(s.samples, 100000);
    Result r;
    Json sweeps = Json::array();
    bool ok = true;
    for (double u : {1.0, 2.0}) {
        for (int degree = 1; degree <= 4; ++degree) {
            const bool exhaustive = degree <= 3;
            const auto sw = refutation_sweep(degree, u, 30, exhaustive, samples, s.seed);
            ok = ok && sw.refuted == sw.tested;
            sweeps.push_back(io::to_json(sw));
        }
    }
    r.report["coefficient_range"] = {-2, 2};
    r.report["i_max"] = 30;
    r.report["sweeps"] = sweeps;
    r.passed = ok;
    return r;
}

Result repro_example2(const Settings& s) {
    const auto rep = example2_quadratic_failure(or_default(s.samples, 100000), s.seed);
    Result r;
    r.report["example2"] = io::to_json(rep);
    r.passed = rep.passed;
    return r;
}

}  // namespace

Result repro(const std::string& target, const Settings& settings) {
    Result r;
    if (target == "example1-bounds") {
        r = repro_example1_bounds(settings);
    } else if (target == "example1-certificate") {
        r = repro_example1_certificate(settings);
    } else if (target == "example1-refute") {
        r = repro_example1_refute(settings);
    } else if (target == "example2") {
        r = repro_example2(settings);
    } else {
        fail(ErrorCode::InvalidArgument,
             "unknown repro target '" + target +
                 "' (example1-bounds, example1-certificate, example1-refute, example2)");
    }
    Json head{{"target", target}, {"seed", settings.seed}};
    for (const auto& [key, value] : r.report.items()) head[key] = value;
    r.report = std::move(head);
    r.report["passed"] = r.passed;
    return r;
}

}  // namespace reachcert::pipeline
