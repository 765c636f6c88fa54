//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "reachcert/error.hpp"
#include "reachcert/linalg.hpp"
#include "reachcert/pipeline.hpp"

using namespace reachcert;

struct reachcert_system {
    io::SystemFile file;
};

struct reachcert_certificate {
    std::unique_ptr<Certificate> cert;
    std::optional<TargetBall> target;
};

namespace {

thread_local std::string g_last_error;

reachcert_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return REACHCERT_INVALID_ARGUMENT;
        case ErrorCode::DimensionMismatch: return REACHCERT_DIMENSION_MISMATCH;
        case ErrorCode::NonFinite: return REACHCERT_NON_FINITE;
        case ErrorCode::NonConvergence: return REACHCERT_NON_CONVERGENCE;
        case ErrorCode::IllConditioned: return REACHCERT_ILL_CONDITIONED;
        case ErrorCode::Precondition: return REACHCERT_PRECONDITION;
        case ErrorCode::Schema: return REACHCERT_SCHEMA;
        case ErrorCode::NoCertificate: return REACHCERT_NO_CERTIFICATE;
        case ErrorCode::InsufficientData: return REACHCERT_INSUFFICIENT_DATA;
        case ErrorCode::Io: return REACHCERT_IO;
    }
    return REACHCERT_INTERNAL;
}

/// Runs f and converts every exception into a status plus message.
template <class F>
reachcert_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return REACHCERT_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return REACHCERT_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return REACHCERT_INTERNAL;
    }
}

void require_ptr(const void* p, const char* name) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

Vector copy_vector(const double* data, std::size_t len) {
    Vector v(static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i) v(static_cast<Eigen::Index>(i)) = data[i];
    return v;
}

pipeline::Settings settings_of(const reachcert_options* o) {
    pipeline::Settings s;
    if (!o) return s;
    if (o->struct_size < sizeof(reachcert_options)) {
        fail(ErrorCode::InvalidArgument, "options.struct_size is smaller than this library expects");
    }
    if (!(o->unit_tol > 0.0)) fail(ErrorCode::InvalidArgument, "unit_tol must be positive");
    if (!(o->rank_tol > 0.0)) fail(ErrorCode::InvalidArgument, "rank_tol must be positive");
    if (o->samples < 0 || o->horizon < 0 || o->trajectories < 0) {
        fail(ErrorCode::InvalidArgument, "samples, horizon and trajectories must be >= 0");
    }
    s.tol.unit_tol = o->unit_tol;
    s.tol.rank_tol = o->rank_tol;
    s.seed = o->seed;
    s.samples = o->samples;
    s.horizon = o->horizon;
    s.trajectories = o->trajectories;
    if (o->target_radius > 0.0) s.target_radius = o->target_radius;
    if (o->target_center) s.target_center = copy_vector(o->target_center, o->target_center_len);
    if (o->x0) s.x0 = copy_vector(o->x0, o->x0_len);
    return s;
}

void set_passed(int* passed, bool value) {
    if (passed) *passed = value ? 1 : 0;
}

}  // namespace

extern "C" {

void reachcert_options_init(reachcert_options* o) {
    if (!o) return;
    std::memset(o, 0, sizeof(*o));
    o->struct_size = sizeof(reachcert_options);
    const SpectralTolerances tol;
    o->unit_tol = tol.unit_tol;
    o->rank_tol = tol.rank_tol;
    o->seed = 1;
}

const char* reachcert_version(void) { return pipeline::kVersion; }

const char* reachcert_last_error(void) { return g_last_error.c_str(); }

const char* reachcert_status_name(reachcert_status status) {
    switch (status) {
        case REACHCERT_OK: return "ok";
        case REACHCERT_INVALID_ARGUMENT: return "invalid argument";
        case REACHCERT_DIMENSION_MISMATCH: return "dimension mismatch";
        case REACHCERT_NON_FINITE: return "non-finite value";
        case REACHCERT_NON_CONVERGENCE: return "no convergence";
        case REACHCERT_ILL_CONDITIONED: return "ill-conditioned";
        case REACHCERT_PRECONDITION: return "precondition violated";
        case REACHCERT_SCHEMA: return "schema violation";
        case REACHCERT_NO_CERTIFICATE: return "no certificate";
        case REACHCERT_INSUFFICIENT_DATA: return "insufficient data";
        case REACHCERT_IO: return "i/o error";
        case REACHCERT_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void reachcert_string_free(char* s) { std::free(s); }

reachcert_status reachcert_system_from_json(const char* json, reachcert_system** out) {
    return guarded([&] {
        require_ptr(json, "json");
        require_ptr(out, "out");
        *out = nullptr;
        io::Json j;
        try {
            j = io::Json::parse(json);
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorCode::Schema, std::string("invalid JSON: ") + e.what());
        }
        *out = new reachcert_system{io::parse_system(j)};
    });
}

reachcert_status reachcert_system_load(const char* path, reachcert_system** out) {
    return guarded([&] {
        require_ptr(path, "path");
        require_ptr(out, "out");
        *out = nullptr;
        *out = new reachcert_system{io::load_system(path)};
    });
}

void reachcert_system_free(reachcert_system* system) { delete system; }

reachcert_status reachcert_system_dim(const reachcert_system* system, int* dim) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(dim, "dim");
        *dim = state_dim(system->file.system);
    });
}

reachcert_status reachcert_system_to_json(const reachcert_system* system, char** json) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(json, "json");
        io::Json j = io::to_json(system->file.system);
        if (system->file.target) j["target"] = io::to_json(*system->file.target);
        *json = duplicate(dump(j));
    });
}

namespace {

reachcert_certificate* wrap_certificate(const io::Json& j) {
    auto cert = io::parse_certificate(j);
    auto target = pipeline::recorded_target(j, cert->dim());
    return new reachcert_certificate{std::move(cert), std::move(target)};
}

}  // namespace

reachcert_status reachcert_certificate_from_json(const char* json, reachcert_certificate** out) {
    return guarded([&] {
        require_ptr(json, "json");
        require_ptr(out, "out");
        *out = nullptr;
        io::Json j;
        try {
            j = io::Json::parse(json);
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorCode::Schema, std::string("invalid JSON: ") + e.what());
        }
        *out = wrap_certificate(j);
    });
}

reachcert_status reachcert_certificate_load(const char* path, reachcert_certificate** out) {
    return guarded([&] {
        require_ptr(path, "path");
        require_ptr(out, "out");
        *out = nullptr;
        const std::string text = io::read_file(path);
        io::Json j;
        try {
            j = io::Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorCode::Schema, std::string(path) + ": invalid JSON: " + e.what());
        }
        *out = wrap_certificate(j);
    });
}

void reachcert_certificate_free(reachcert_certificate* cert) { delete cert; }

reachcert_status reachcert_certificate_to_json(const reachcert_certificate* cert, char** json) {
    return guarded([&] {
        require_ptr(cert, "cert");
        require_ptr(json, "json");
        const io::Json j = cert->target ? pipeline::certificate_json(*cert->cert, *cert->target)
                                        : io::to_json(*cert->cert);
        *json = duplicate(dump(j));
    });
}

reachcert_status reachcert_classify(const reachcert_system* system,
                                    const reachcert_options* options, char** report) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(report, "report");
        const auto r = pipeline::classify(system->file, settings_of(options));
        *report = duplicate(dump(r.report));
    });
}

reachcert_status reachcert_certify(const reachcert_system* system,
                                   const reachcert_options* options, reachcert_certificate** cert,
                                   int* passed, char** report) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(report, "report");
        if (cert) *cert = nullptr;
        auto r = pipeline::certify(system->file, settings_of(options));
        *report = duplicate(dump(r.report));
        set_passed(passed, r.passed);
        if (cert) {
            auto target = pipeline::recorded_target(r.report["certificate"], r.certificate->dim());
            *cert = new reachcert_certificate{std::move(r.certificate), std::move(target)};
        }
    });
}

reachcert_status reachcert_verify(const reachcert_system* system,
                                  const reachcert_certificate* cert,
                                  const reachcert_options* options, int* passed, char** report) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(cert, "cert");
        require_ptr(report, "report");
        const auto r = pipeline::verify(system->file, *cert->cert, cert->target,
                                        settings_of(options));
        *report = duplicate(dump(r.report));
        set_passed(passed, r.passed);
    });
}

reachcert_status reachcert_simulate(const reachcert_system* system,
                                    const reachcert_options* options, char** report) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(report, "report");
        const auto r = pipeline::simulate(system->file, settings_of(options));
        *report = duplicate(dump(r.report));
    });
}

reachcert_status reachcert_trajectory_csv(const reachcert_system* system,
                                          const reachcert_options* options, char** csv) {
    return guarded([&] {
        require_ptr(system, "system");
        require_ptr(csv, "csv");
        const auto s = settings_of(options);
        const int n = state_dim(system->file.system);
        const Vector x0 = s.x0 ? *s.x0 : pipeline::default_x0(n);
        if (x0.size() != n) {
            fail(ErrorCode::DimensionMismatch, "x0 has " + std::to_string(x0.size()) +
                                                   " entries, expected " + std::to_string(n));
        }
        const long long horizon = s.horizon > 0 ? s.horizon : pipeline::kDefaultHorizon;
        *csv = duplicate(pipeline::trajectory_csv(system->file.system, x0, horizon, s.seed));
    });
}

reachcert_status reachcert_repro(const char* target, const reachcert_options* options,
                                 int* passed, char** report) {
    return guarded([&] {
        require_ptr(target, "target");
        require_ptr(report, "report");
        const auto r = pipeline::repro(target, settings_of(options));
        *report = duplicate(dump(r.report));
        set_passed(passed, r.passed);
    });
}

reachcert_status reachcert_lyapunov(const double* a, int n, double* q) {
    return guarded([&] {
        require_ptr(a, "a");
        require_ptr(q, "q");
        if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
        Matrix m(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) m(r, c) = a[r * n + c];
        }
        const Matrix sol = linalg::solve_discrete_lyapunov(m);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) q[r * n + c] = sol(r, c);
        }
    });
}

reachcert_status reachcert_sha256_file(const char* path, char** hex) {
    return guarded([&] {
        require_ptr(path, "path");
        require_ptr(hex, "hex");
        *hex = duplicate(io::sha256_file(path));
    });
}

}  // extern "C"
