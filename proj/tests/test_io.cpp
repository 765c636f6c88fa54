//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>

#include "reachcert/error.hpp"
#include "reachcert/io.hpp"
#include "support.hpp"

using namespace reachcert;
using namespace reachcert::testing;
using io::Json;

namespace {

std::string schema_message(const Json& j) {
    try {
        io::parse_system(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Schema);
        return e.what();
    }
    FAIL("expected a schema error");
    return {};
}

std::string certificate_message(const Json& j) {
    try {
        io::parse_certificate(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Schema);
        return e.what();
    }
    FAIL("expected a schema error");
    return {};
}

bool contains_text(const std::string& s, const std::string& part) {
    return s.find(part) != std::string::npos;
}

Json walk_json() {
    return Json::parse(R"({"kind": "linear", "A": [[1.0]], "B": [[1.0]],
        "noise": {"kind": "uniform-box", "dim": 1, "half_width": 1.0},
        "target": {"center": [0.0], "radius": 2.0}})");
}

}  // namespace

TEST_CASE("linear system files") {
    const auto f = io::parse_system(walk_json());
    const auto& lin = std::get<LinearSystem>(f.system);
    CHECK(lin.a(0, 0) == 1.0);
    CHECK(lin.noise.kind() == NoiseKind::UniformBox);
    CHECK(lin.noise.covariance()(0, 0) == doctest::Approx(1.0 / 3.0));
    REQUIRE(f.target.has_value());
    CHECK(f.target->radius == 2.0);

    // Serialize and parse back.
    Json again = io::to_json(f.system);
    again["target"] = io::to_json(*f.target);
    const auto g = io::parse_system(again);
    CHECK(std::get<LinearSystem>(g.system).a == lin.a);
    CHECK(std::get<LinearSystem>(g.system).b == lin.b);
    CHECK(io::to_json(g.system).dump() == io::to_json(f.system).dump());

    Json gauss = Json::parse(R"({"kind": "linear", "A": [[0.5, 0], [0, 0.5]],
        "B": [[1, 0], [0, 1]], "noise": {"kind": "gaussian", "covariance": [[2, 0], [0, 1]]}})");
    const auto h = io::parse_system(gauss);
    CHECK(noise_of(h.system).covariance()(0, 0) == 2.0);
    CHECK_FALSE(h.target.has_value());

    Json product = gauss;
    product["noise"] = Json::parse(R"({"kind": "uniform-interval-product", "half_widths": [1, 3]})");
    CHECK(noise_of(io::parse_system(product).system).covariance()(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("polynomial system files") {
    Json j = Json::parse(R"json({"kind": "polynomial",
        "transition": ["0.5*x1*(1 + x2 + w1)", "0.5*x2"],
        "noise": {"kind": "uniform-box", "dim": 1, "half_width": 1.0}})json");
    const auto f = io::parse_system(j);
    Vector x(2), w(1);
    x << 2.0, 2.0;
    w << 0.0;
    const Vector y = step(f.system, x, w);
    CHECK(y(0) == doctest::Approx(3.0));
    CHECK(y(1) == doctest::Approx(1.0));
    CHECK(io::to_json(f.system)["transition"][0] == "0.5*x1*(1 + x2 + w1)");

    j["transition"][1] = "0.5*x2 +";
    CHECK(contains_text(schema_message(j), "system.transition"));
}

TEST_CASE("system schema violations name the field") {
    Json j = walk_json();
    j.erase("kind");
    CHECK(contains_text(schema_message(j), "missing field 'kind'"));

    j = walk_json();
    j["kind"] = "affine";
    CHECK(contains_text(schema_message(j), "system.kind"));

    j = walk_json();
    j["A"] = Json::parse("[[1, 0], [0]]");
    CHECK(contains_text(schema_message(j), "system.A[1]"));

    j = walk_json();
    j["A"] = Json::parse(R"([["one"]])");
    CHECK(contains_text(schema_message(j), "system.A[0][0]"));

    j = walk_json();
    j["B"] = Json::parse("[[1, 1]]");
    CHECK(contains_text(schema_message(j), "system.B"));

    j = walk_json();
    j["noise"]["kind"] = "laplace";
    CHECK(contains_text(schema_message(j), "system.noise.kind"));

    j = walk_json();
    j["noise"] = Json::parse(R"({"kind": "gaussian", "covariance": [[-1]]})");
    CHECK(contains_text(schema_message(j), "system.noise"));

    j = walk_json();
    j["target"]["center"] = Json::parse("[0, 0]");
    CHECK(contains_text(schema_message(j), "system.target.center"));

    j = walk_json();
    j["target"]["radius"] = -1.0;
    CHECK(contains_text(schema_message(j), "system.target"));
}

TEST_CASE("files on disk") {
    const std::string path = "test_io_system.json";
    {
        std::ofstream out(path);
        out << walk_json().dump();
    }
    CHECK(std::get<LinearSystem>(io::load_system(path).system).a(0, 0) == 1.0);
    std::remove(path.c_str());

    try {
        io::load_system("does/not/exist.json");
        FAIL("expected an i/o error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }

    const std::string broken = "test_io_broken.json";
    {
        std::ofstream out(broken);
        out << "{\"kind\": ";
    }
    try {
        io::load_system(broken);
        FAIL("expected a schema error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Schema);
        CHECK(contains_text(e.what(), "invalid JSON"));
    }
    std::remove(broken.c_str());
}

TEST_CASE("sha256 of known inputs") {
    const std::string path = "test_io_hash.txt";
    {
        std::ofstream out(path, std::ios::binary);
        out << "abc";
    }
    CHECK(io::sha256_file(path) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    {
        std::ofstream out(path, std::ios::binary);
    }
    CHECK(io::sha256_file(path) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    std::remove(path.c_str());
}

TEST_CASE("certificate round trips") {
    std::mt19937_64 rng(8);
    const auto sys = make_linear_system(random_with_radius(3, 0.8, rng), Matrix::Identity(3, 3),
                                        gaussian_identity(3));
    const auto quad = synthesize_quadratic(sys, unit_ball(3));
    const auto q2 = io::parse_certificate(io::to_json(quad));
    const auto& back = dynamic_cast<const QuadraticCertificate&>(*q2);
    CHECK(back.q() == quad.q());
    CHECK(back.b() == quad.b());
    CHECK(back.compact_radius() == quad.compact_radius());
    CHECK(back.decrease() == quad.decrease());
    CHECK(back.r0 == quad.r0);
    CHECK(back.noise_set_bound == quad.noise_set_bound);
    CHECK(io::to_json(back).dump() == io::to_json(quad).dump());

    const auto rot = make_linear_system(rotation(std::numbers::pi / 4), Matrix::Identity(2, 2),
                                        gaussian_identity(2));
    const auto log = synthesize_logarithmic(rot, unit_ball(2, 3.0)).certificate;
    const auto l2 = io::parse_certificate(io::to_json(log));
    const auto& lback = dynamic_cast<const LogCertificate&>(*l2);
    CHECK(lback.q_star() == log.q_star());
    CHECK(lback.compact_radius() == log.compact_radius());
    CHECK(lback.probability() == log.probability());
    CHECK(io::to_json(lback).dump() == io::to_json(log).dump());

    Matrix a = Matrix::Identity(2, 2);
    a(1, 1) = 0.5;
    const auto comp = synthesize_composite(
        make_linear_system(a, Matrix::Identity(2, 2), gaussian_identity(2)), unit_ball(2));
    const auto c2 = io::parse_certificate(io::to_json(comp.certificate));
    CHECK(io::to_json(*c2).dump() == io::to_json(comp.certificate).dump());
    Vector x(2);
    x << 7.0, -3.0;
    CHECK(c2->drift(x) == comp.certificate.drift(x));
}

TEST_CASE("certificate schema violations") {
    QuadraticCertificate base(Matrix::Identity(2, 2), 1.0);
    base.set_compact_radius(1.0);
    base.set_decrease(0.5);
    const Json good = io::to_json(base);

    Json j = good;
    j["Q"] = Json::parse("[[1, 0], [0, -1]]");
    CHECK(contains_text(certificate_message(j), "certificate.Q"));

    j = good;
    j["Q"] = Json::parse("[[1, 2], [0, 1]]");
    CHECK(contains_text(certificate_message(j), "positive definite"));

    j = good;
    j["delta"] = 0.0;
    CHECK(contains_text(certificate_message(j), "certificate.delta"));

    j = good;
    j["epsilon"] = 1.5;
    CHECK(contains_text(certificate_message(j), "certificate.epsilon"));

    j = good;
    j.erase("compact_radius");
    CHECK(contains_text(certificate_message(j), "compact_radius"));

    j = good;
    j["kind"] = "barrier";
    CHECK(contains_text(certificate_message(j), "certificate.kind"));

    j = Json::parse(R"({"kind": "logarithmic", "Q_star": [[1]], "b": 2,
        "domain_threshold": 1.0, "compact_radius_star": 3, "delta": 0.1})");
    CHECK(contains_text(certificate_message(j), "domain_threshold"));
}

TEST_CASE("verdict reports carry the branch trace") {
    const auto sys = make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1), uniform_unit(1));
    const Verdict v = classify(sys, unit_ball(1, 2.0));
    const Json j = io::to_json(v);
    CHECK(j["outcome"] == "ReachableCritical");
    CHECK(j["certificate_advice"] == "logarithmic");
    REQUIRE(j["branch_trace"].size() == v.trace.size());
    for (std::size_t i = 0; i < v.trace.size(); ++i) {
        CHECK(j["branch_trace"][i]["key"] == v.trace[i].key);
        CHECK(j["branch_trace"][i]["result"] == v.trace[i].result);
    }
    CHECK(j["spectrum"]["rho"] == doctest::Approx(1.0));
}
