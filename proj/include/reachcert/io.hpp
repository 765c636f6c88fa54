//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "reachcert/certificates.hpp"
#include "reachcert/classifier.hpp"
#include "reachcert/counterexamples.hpp"
#include "reachcert/synthesis.hpp"
#include "reachcert/system_model.hpp"
#include "reachcert/trajectory.hpp"
#include "reachcert/verifier.hpp"

namespace reachcert::io {

using Json = nlohmann::ordered_json;

/*!
 * System file.
 *
 * {"kind": "linear", "A": [[..]], "B": [[..]], "noise": NOISE, "target": TARGET}
 * {"kind": "polynomial", "transition": ["0.5*x1*(1 + x2 + w1)", ..], "noise": NOISE}
 *
 * NOISE is {"kind": "gaussian", "covariance": [[..]]},
 * {"kind": "uniform-box", "dim": m, "half_width": h} or
 * {"kind": "uniform-interval-product", "half_widths": [..]}.
 * TARGET (optional) is {"center": [..], "radius": r, "weight": [[..]]}.
 */
struct SystemFile {
    System system;
    std::optional<TargetBall> target;
};

SystemFile parse_system(const Json& j);
SystemFile load_system(const std::string& path);
Json to_json(const System& system);
Json to_json(const TargetBall& target);
TargetBall parse_target(const Json& j, int dim);

/// Certificates with every constant; custom certificates are not serializable.
Json to_json(const Certificate& cert);
std::unique_ptr<Certificate> parse_certificate(const Json& j);
std::unique_ptr<Certificate> load_certificate(const std::string& path);

Json to_json(const Verdict& verdict);
Json to_json(const SpectralReport& report);
Json to_json(const DriftReport& report);
Json to_json(const VariantReport& report);
Json to_json(const ScanResult& scan);
Json to_json(const DecreaseEstimate& estimate);
Json to_json(const EnsembleStats& stats);
Json to_json(const DecayFit& fit);
Json to_json(const BoundCheck& check);
Json to_json(const RefutationSweep& sweep);
Json to_json(const PolyCandidate& candidate);
Json to_json(const Example1CertificateReport& report);
Json to_json(const Example2Report& report);

Json matrix_json(const Matrix& m);
Json vector_json(const Vector& v);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace reachcert::io
