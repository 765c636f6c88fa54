//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include <doctest.h>

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "reachcert.h"

using Json = nlohmann::json;

namespace {

const char* kWalk = R"({"kind": "linear", "A": [[1.0]], "B": [[1.0]],
    "noise": {"kind": "uniform-box", "dim": 1, "half_width": 1.0},
    "target": {"center": [0.0], "radius": 2.0}})";

const char* kUnstable = R"({"kind": "linear", "A": [[2.0]], "B": [[1.0]],
    "noise": {"kind": "uniform-box", "dim": 1, "half_width": 1.0}})";

const char* kStable = R"({"kind": "linear", "A": [[0.5, 0.2], [0.0, -0.3]],
    "B": [[1, 0], [0, 1]], "noise": {"kind": "gaussian", "covariance": [[1, 0], [0, 1]]}})";

reachcert_system* load(const char* json) {
    reachcert_system* sys = nullptr;
    REQUIRE(reachcert_system_from_json(json, &sys) == REACHCERT_OK);
    REQUIRE(sys != nullptr);
    return sys;
}

Json take_json(char* s) {
    REQUIRE(s != nullptr);
    Json j = Json::parse(s);
    reachcert_string_free(s);
    return j;
}

}  // namespace

TEST_CASE("options and metadata") {
    reachcert_options o;
    reachcert_options_init(&o);
    CHECK(o.struct_size == sizeof(reachcert_options));
    CHECK(o.unit_tol == 1e-9);
    CHECK(o.seed == 1);
    CHECK(o.samples == 0);
    CHECK(o.target_center == nullptr);
    CHECK(std::string(reachcert_version()).size() > 0);
    CHECK(std::string(reachcert_status_name(REACHCERT_SCHEMA)) == "schema violation");
    reachcert_options_init(nullptr);
}

TEST_CASE("null arguments and bad options") {
    reachcert_system* sys = nullptr;
    CHECK(reachcert_system_from_json(nullptr, &sys) == REACHCERT_INVALID_ARGUMENT);
    CHECK(std::string(reachcert_last_error()).find("json") != std::string::npos);
    CHECK(reachcert_system_from_json(kWalk, nullptr) == REACHCERT_INVALID_ARGUMENT);
    char* report = nullptr;
    CHECK(reachcert_classify(nullptr, nullptr, &report) == REACHCERT_INVALID_ARGUMENT);
    CHECK(report == nullptr);

    sys = load(kWalk);
    reachcert_options o;
    reachcert_options_init(&o);
    o.struct_size = 8;
    CHECK(reachcert_classify(sys, &o, &report) == REACHCERT_INVALID_ARGUMENT);
    reachcert_options_init(&o);
    o.unit_tol = -1.0;
    CHECK(reachcert_classify(sys, &o, &report) == REACHCERT_INVALID_ARGUMENT);
    reachcert_options_init(&o);
    const double center[2] = {0.0, 0.0};
    o.target_center = center;
    o.target_center_len = 2;
    CHECK(reachcert_classify(sys, &o, &report) == REACHCERT_DIMENSION_MISMATCH);
    reachcert_system_free(sys);
    reachcert_system_free(nullptr);
    reachcert_certificate_free(nullptr);
    reachcert_string_free(nullptr);
}

TEST_CASE("schema errors surface as status and message") {
    reachcert_system* sys = nullptr;
    CHECK(reachcert_system_from_json("{", &sys) == REACHCERT_SCHEMA);
    CHECK(sys == nullptr);
    CHECK(reachcert_system_from_json(R"({"kind": "linear", "A": [[1, 2]], "B": [[1]],
        "noise": {"kind": "gaussian", "covariance": [[1]]}})",
                                     &sys) == REACHCERT_SCHEMA);
    CHECK(std::string(reachcert_last_error()).find("system.A") != std::string::npos);
    CHECK(reachcert_system_load("/nonexistent/system.json", &sys) == REACHCERT_IO);

    reachcert_certificate* cert = nullptr;
    CHECK(reachcert_certificate_from_json(
              R"({"kind": "quadratic", "Q": [[-1]], "b": 1, "compact_radius": 1, "delta": 1})",
              &cert) == REACHCERT_SCHEMA);
    CHECK(cert == nullptr);
}

TEST_CASE("last error is per thread") {
    reachcert_system* sys = nullptr;
    CHECK(reachcert_system_from_json("{", &sys) == REACHCERT_SCHEMA);
    std::string other;
    std::thread t([&] {
        reachcert_system* s = nullptr;
        reachcert_system_from_json(kWalk, &s);
        other = reachcert_last_error();
        reachcert_system_free(s);
    });
    t.join();
    CHECK(other.empty());
    CHECK(std::string(reachcert_last_error()).find("invalid JSON") != std::string::npos);
}

TEST_CASE("classify through the C interface") {
    auto* sys = load(kWalk);
    int dim = 0;
    CHECK(reachcert_system_dim(sys, &dim) == REACHCERT_OK);
    CHECK(dim == 1);
    char* report = nullptr;
    REQUIRE(reachcert_classify(sys, nullptr, &report) == REACHCERT_OK);
    const Json j = take_json(report);
    CHECK(j["verdict"]["outcome"] == "ReachableCritical");
    CHECK(j["target"]["radius"] == 2.0);

    reachcert_options o;
    reachcert_options_init(&o);
    o.target_radius = 5.0;
    REQUIRE(reachcert_classify(sys, &o, &report) == REACHCERT_OK);
    CHECK(take_json(report)["target"]["radius"] == 5.0);

    char* text = nullptr;
    REQUIRE(reachcert_system_to_json(sys, &text) == REACHCERT_OK);
    const Json echo = take_json(text);
    CHECK(echo["kind"] == "linear");
    CHECK(echo["noise"]["kind"] == "uniform-box");
    reachcert_system_free(sys);
}

TEST_CASE("certify refuses non-reachable systems") {
    auto* sys = load(kUnstable);
    char* report = nullptr;
    reachcert_certificate* cert = nullptr;
    CHECK(reachcert_certify(sys, nullptr, &cert, nullptr, &report) == REACHCERT_NO_CERTIFICATE);
    CHECK(std::string(reachcert_last_error()) ==
          "no certificate exists for NotReachableUnstable");
    CHECK(cert == nullptr);
    CHECK(report == nullptr);
    reachcert_system_free(sys);
}

TEST_CASE("certify then verify round trip") {
    for (const char* json : {kStable, kWalk}) {
        auto* sys = load(json);
        char* report = nullptr;
        reachcert_certificate* cert = nullptr;
        int passed = 0;
        REQUIRE(reachcert_certify(sys, nullptr, &cert, &passed, &report) == REACHCERT_OK);
        CHECK(passed == 1);
        const Json rep = take_json(report);
        CHECK(rep["verification"]["passed"] == true);

        char* text = nullptr;
        REQUIRE(reachcert_certificate_to_json(cert, &text) == REACHCERT_OK);
        const std::string cert_text = text;
        reachcert_string_free(text);
        CHECK(Json::parse(cert_text) == rep["certificate"]);

        reachcert_certificate* loaded = nullptr;
        REQUIRE(reachcert_certificate_from_json(cert_text.c_str(), &loaded) == REACHCERT_OK);
        passed = 0;
        REQUIRE(reachcert_verify(sys, loaded, nullptr, &passed, &report) == REACHCERT_OK);
        CHECK(passed == 1);
        take_json(report);

        REQUIRE(reachcert_certificate_to_json(loaded, &text) == REACHCERT_OK);
        CHECK(std::string(text) == cert_text);
        reachcert_string_free(text);

        reachcert_certificate_free(loaded);
        reachcert_certificate_free(cert);
        reachcert_system_free(sys);
    }
}

TEST_CASE("verify rejects a certificate of the wrong dimension") {
    auto* sys = load(kWalk);
    reachcert_certificate* cert = nullptr;
    REQUIRE(reachcert_certificate_from_json(
                R"({"kind": "quadratic", "Q": [[1, 0], [0, 1]], "b": 1, "compact_radius": 1,
                    "delta": 1})",
                &cert) == REACHCERT_OK);
    char* report = nullptr;
    CHECK(reachcert_verify(sys, cert, nullptr, nullptr, &report) == REACHCERT_DIMENSION_MISMATCH);
    reachcert_certificate_free(cert);
    reachcert_system_free(sys);
}

TEST_CASE("simulate and trajectory CSV") {
    auto* sys = load(kWalk);
    reachcert_options o;
    reachcert_options_init(&o);
    const double x0[1] = {0.5};
    o.x0 = x0;
    o.x0_len = 1;
    o.trajectories = 10;
    o.horizon = 5;
    char* report = nullptr;
    REQUIRE(reachcert_simulate(sys, &o, &report) == REACHCERT_OK);
    const Json j = take_json(report);
    CHECK(j["ensemble"]["hit_fraction"] == 1.0);
    CHECK(j["ensemble"]["trajectories"] == 10);

    char* csv = nullptr;
    REQUIRE(reachcert_trajectory_csv(sys, &o, &csv) == REACHCERT_OK);
    const std::string text = csv;
    reachcert_string_free(csv);
    CHECK(text.rfind("k,x1\n0,0.5\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 7);

    const double bad[2] = {1.0, 2.0};
    o.x0 = bad;
    o.x0_len = 2;
    CHECK(reachcert_simulate(sys, &o, &report) == REACHCERT_DIMENSION_MISMATCH);
    reachcert_system_free(sys);
}

TEST_CASE("repro targets") {
    char* report = nullptr;
    int passed = 0;
    REQUIRE(reachcert_repro("example2", nullptr, &passed, &report) == REACHCERT_OK);
    CHECK(passed == 1);
    const Json j = take_json(report);
    CHECK(j["target"] == "example2");
    CHECK(j["example2"]["max_abs_error"].get<double>() < 1e-12);
    CHECK(reachcert_repro("example9", nullptr, &passed, &report) == REACHCERT_INVALID_ARGUMENT);
}

TEST_CASE("discrete Lyapunov solve") {
    const double a[4] = {0.5, 0.4, -0.1, 0.3};
    double q[4] = {0, 0, 0, 0};
    REQUIRE(reachcert_lyapunov(a, 2, q) == REACHCERT_OK);
    // Residual of A^T Q A - Q + I computed by hand, row-major.
    double res = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) s += a[k * 2 + i] * q[k * 2 + l] * a[l * 2 + j];
            }
            s += -q[i * 2 + j] + (i == j ? 1.0 : 0.0);
            res += s * s;
        }
    }
    CHECK(std::sqrt(res) < 1e-12);
    CHECK(q[0] > 0.0);
    CHECK(q[0] * q[3] - q[1] * q[2] > 0.0);

    const double unstable[1] = {1.5};
    double q1[1];
    CHECK(reachcert_lyapunov(unstable, 1, q1) != REACHCERT_OK);
    CHECK(reachcert_lyapunov(a, 0, q) == REACHCERT_INVALID_ARGUMENT);
}
