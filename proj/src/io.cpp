//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/io.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "reachcert/error.hpp"

namespace reachcert::io {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
    fail(ErrorCode::Schema, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) schema(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) schema(where, std::string("missing field '") + key + "'");
    return *it;
}

const Json* optional_field(const Json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) schema(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema(where, "expected a finite number");
    return v;
}

long long integer(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) schema(where, "expected an integer");
    return j.get<long long>();
}

std::string text(const Json& j, const std::string& where) {
    if (!j.is_string()) schema(where, "expected a string");
    return j.get<std::string>();
}

Vector parse_vector(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema(where, "expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

Matrix parse_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema(where, "expected a non-empty array of rows");
    const Json& first = j[0];
    if (!first.is_array() || first.empty()) schema(where + "[0]", "expected a non-empty row");
    const std::size_t cols = first.size();
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string row = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array()) schema(row, "expected a row array");
        if (j[r].size() != cols) {
            schema(row, "has " + std::to_string(j[r].size()) + " entries, expected " +
                            std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number(j[r][c], row + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

/// Runs f, turning argument errors into schema errors at `where`.
template <class F>
auto as_schema(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Schema || e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::DimensionMismatch ||
            e.code() == ErrorCode::NonFinite) {
            schema(where, e.what());
        }
        throw;
    }
}

NoiseModel parse_noise(const Json& j, const std::string& where) {
    const std::string kind = text(field(j, "kind", where), where + ".kind");
    if (kind == "gaussian") {
        const Matrix cov = parse_matrix(field(j, "covariance", where), where + ".covariance");
        return as_schema(where, [&] { return NoiseModel::gaussian(cov); });
    }
    if (kind == "uniform-box") {
        const long long dim = integer(field(j, "dim", where), where + ".dim");
        if (dim < 1) schema(where + ".dim", "must be >= 1");
        const double h = number(field(j, "half_width", where), where + ".half_width");
        return as_schema(where, [&] {
            return NoiseModel::uniform_box(Vector::Constant(static_cast<Eigen::Index>(dim), h));
        });
    }
    if (kind == "uniform-interval-product") {
        const Vector h = parse_vector(field(j, "half_widths", where), where + ".half_widths");
        return as_schema(where, [&] { return NoiseModel::uniform_interval_product(h); });
    }
    schema(where + ".kind", "unknown noise kind '" + kind +
                                "' (gaussian, uniform-box, uniform-interval-product)");
}

Json noise_json(const NoiseModel& noise) {
    Json j;
    j["kind"] = to_string(noise.kind());
    switch (noise.kind()) {
        case NoiseKind::Gaussian: j["covariance"] = matrix_json(noise.covariance()); break;
        case NoiseKind::UniformBox:
            j["dim"] = noise.dim();
            j["half_width"] = noise.half_widths()(0);
            break;
        case NoiseKind::UniformIntervalProduct:
            j["half_widths"] = vector_json(noise.half_widths());
            break;
    }
    return j;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_delta(const Json& j, const std::string& where) {
    const double d = number(field(j, "delta", where), where + ".delta");
    if (!(d > 0.0)) schema(where + ".delta", "must be positive");
    return d;
}

void read_common(const Json& j, const std::string& where, Certificate& cert,
                 const char* radius_key) {
    const double r = number(field(j, radius_key, where), where + "." + radius_key);
    if (r < 0.0) schema(where + "." + radius_key, "must be non-negative");
    cert.set_compact_radius(r);
    cert.set_decrease(read_delta(j, where));
    if (const Json* e = optional_field(j, "epsilon")) {
        const double eps = number(*e, where + ".epsilon");
        if (eps < 0.0 || eps > 1.0) schema(where + ".epsilon", "must lie in [0, 1]");
        cert.set_probability(eps);
    }
    if (const Json* notes = optional_field(j, "notes")) {
        if (!notes->is_array()) schema(where + ".notes", "expected an array of strings");
        for (const auto& n : *notes) cert.add_note(text(n, where + ".notes"));
    }
}

Json notes_json(const Certificate& cert) {
    Json a = Json::array();
    for (const auto& n : cert.notes()) a.push_back(n);
    return a;
}

Json shell_json(const ShellResult& s) {
    Json j;
    j["radius"] = s.radius;
    j["points"] = s.points;
    j["violations"] = s.violations;
    j["worst_estimate"] = s.worst_estimate;
    j["worst_half_width"] = s.worst_half_width;
    j["worst_x"] = vector_json(s.worst_x);
    return j;
}

constexpr std::size_t kListedViolations = 20;

}  // namespace

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number_or_null(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_or_null(v(i)));
    return a;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string sha256_file(const std::string& path) {
    const std::string bytes = read_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        fail(ErrorCode::Io, "sha256 failed for '" + path + "'");
    }
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
    return os.str();
}

namespace {

Json parse_text(const std::string& content, const std::string& path) {
    try {
        return Json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::Schema, path + ": invalid JSON: " + e.what());
    }
}

}  // namespace

//---------------------------------------------------------------------------//
// Systems
//---------------------------------------------------------------------------//

TargetBall parse_target(const Json& j, int dim) {
    const std::string where = "system.target";
    Vector center = Vector::Zero(dim);
    if (const Json* c = optional_field(j, "center")) center = parse_vector(*c, where + ".center");
    if (center.size() != dim) {
        schema(where + ".center", "has " + std::to_string(center.size()) + " entries, expected " +
                                      std::to_string(dim));
    }
    const double radius = number(field(j, "radius", where), where + ".radius");
    std::optional<Matrix> weight;
    if (const Json* w = optional_field(j, "weight")) weight = parse_matrix(*w, where + ".weight");
    return as_schema(where, [&] { return make_target(center, radius, weight); });
}

SystemFile parse_system(const Json& j) {
    const std::string where = "system";
    const std::string kind = text(field(j, "kind", where), where + ".kind");
    const NoiseModel noise = parse_noise(field(j, "noise", where), where + ".noise");
    SystemFile out;
    if (kind == "linear") {
        const Matrix a = parse_matrix(field(j, "A", where), where + ".A");
        const Matrix b = parse_matrix(field(j, "B", where), where + ".B");
        if (a.rows() != a.cols()) schema(where + ".A", "must be square");
        if (b.rows() != a.rows()) {
            schema(where + ".B", "has " + std::to_string(b.rows()) + " rows, expected " +
                                     std::to_string(a.rows()));
        }
        if (b.cols() != noise.dim()) {
            schema(where + ".B", "has " + std::to_string(b.cols()) +
                                     " columns but the noise dimension is " +
                                     std::to_string(noise.dim()));
        }
        out.system = as_schema(where, [&] { return make_linear_system(a, b, noise); });
    } else if (kind == "polynomial") {
        const Json& tr = field(j, "transition", where);
        if (!tr.is_array() || tr.empty()) {
            schema(where + ".transition", "expected a non-empty array of expressions");
        }
        std::vector<std::string> exprs;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            exprs.push_back(text(tr[i], where + ".transition[" + std::to_string(i) + "]"));
        }
        out.system = as_schema(where + ".transition",
                               [&] { return make_polynomial_system(exprs, noise); });
    } else {
        schema(where + ".kind", "unknown system kind '" + kind + "' (linear, polynomial)");
    }
    if (const Json* t = optional_field(j, "target")) {
        out.target = parse_target(*t, state_dim(out.system));
    }
    return out;
}

SystemFile load_system(const std::string& path) {
    return parse_system(parse_text(read_file(path), path));
}

Json to_json(const System& system) {
    Json j;
    if (const auto* lin = std::get_if<LinearSystem>(&system)) {
        j["kind"] = "linear";
        j["A"] = matrix_json(lin->a);
        j["B"] = matrix_json(lin->b);
    } else {
        const auto& poly = std::get<PolynomialSystem>(system);
        j["kind"] = "polynomial";
        Json tr = Json::array();
        for (const auto& p : poly.transition) tr.push_back(p.source());
        j["transition"] = tr;
    }
    j["noise"] = noise_json(noise_of(system));
    return j;
}

Json to_json(const TargetBall& target) {
    Json j;
    j["center"] = vector_json(target.center);
    j["radius"] = target.radius;
    if (target.weight) j["weight"] = matrix_json(*target.weight);
    return j;
}

//---------------------------------------------------------------------------//
// Certificates
//---------------------------------------------------------------------------//

Json to_json(const Certificate& cert) {
    Json j;
    j["kind"] = to_string(cert.kind());
    j["dim"] = cert.dim();
    switch (cert.kind()) {
        case CertificateKind::Quadratic: {
            const auto& q = static_cast<const QuadraticCertificate&>(cert);
            j["Q"] = matrix_json(q.q());
            j["b"] = q.b();
            j["alpha"] = q.alpha;
            j["compact_radius"] = q.compact_radius();
            j["compact_radius_sq"] = q.compact_radius_sq();
            j["r0"] = q.r0;
            j["delta"] = q.decrease();
            j["noise_set_bound"] = number_or_null(q.noise_set_bound);
            j["H"] = "r - b";
            break;
        }
        case CertificateKind::Logarithmic: {
            const auto& l = static_cast<const LogCertificate&>(cert);
            j["Q_star"] = matrix_json(l.q_star());
            j["b"] = l.b();
            j["domain_threshold"] = l.domain_threshold();
            j["compact_radius_star"] = l.compact_radius();
            j["delta"] = l.decrease();
            j["H"] = "exp(2 r^2) - b";
            break;
        }
        case CertificateKind::Composite: {
            const auto& c = static_cast<const CompositeCertificate&>(cert);
            j["form"] = to_string(c.form());
            j["basis"] = matrix_json(c.basis());
            j["unit_dim"] = c.unit_dim();
            j["Q_star"] = matrix_json(c.q_star());
            j["Q"] = matrix_json(c.q());
            j["b"] = c.b();
            j["compact_radius"] = c.compact_radius();
            j["delta"] = c.decrease();
            j["verified"] = c.verified;
            break;
        }
        case CertificateKind::Custom:
            fail(ErrorCode::InvalidArgument, "custom certificates cannot be serialized");
    }
    j["epsilon"] = number_or_null(cert.probability());
    j["notes"] = notes_json(cert);
    return j;
}

std::unique_ptr<Certificate> parse_certificate(const Json& j) {
    const std::string where = "certificate";
    const std::string kind = text(field(j, "kind", where), where + ".kind");
    if (kind == "quadratic") {
        const Matrix q = parse_matrix(field(j, "Q", where), where + ".Q");
        const double b = number(field(j, "b", where), where + ".b");
        auto cert = as_schema(where + ".Q", [&] { return std::make_unique<QuadraticCertificate>(q, b); });
        read_common(j, where, *cert, "compact_radius");
        if (const Json* a = optional_field(j, "alpha")) cert->alpha = number(*a, where + ".alpha");
        if (const Json* r = optional_field(j, "r0")) cert->r0 = number(*r, where + ".r0");
        if (const Json* s = optional_field(j, "noise_set_bound")) {
            cert->noise_set_bound = number(*s, where + ".noise_set_bound");
        }
        return cert;
    }
    if (kind == "logarithmic") {
        const Matrix q = parse_matrix(field(j, "Q_star", where), where + ".Q_star");
        const double b = number(field(j, "b", where), where + ".b");
        double rho_min = std::exp(1.0);
        if (const Json* d = optional_field(j, "domain_threshold")) {
            rho_min = number(*d, where + ".domain_threshold");
            if (rho_min < std::exp(1.0) * (1.0 - 1e-15)) {
                schema(where + ".domain_threshold", "must be >= e");
            }
        }
        auto cert = as_schema(where + ".Q_star",
                              [&] { return std::make_unique<LogCertificate>(q, b, rho_min); });
        read_common(j, where, *cert, "compact_radius_star");
        return cert;
    }
    if (kind == "composite") {
        const Matrix basis = parse_matrix(field(j, "basis", where), where + ".basis");
        const long long nu = integer(field(j, "unit_dim", where), where + ".unit_dim");
        const Matrix qs = parse_matrix(field(j, "Q_star", where), where + ".Q_star");
        const Matrix q = parse_matrix(field(j, "Q", where), where + ".Q");
        const double b = number(field(j, "b", where), where + ".b");
        CompositeForm form = CompositeForm::Damped;
        if (const Json* f = optional_field(j, "form")) {
            const std::string s = text(*f, where + ".form");
            if (s == "additive") {
                form = CompositeForm::Additive;
            } else if (s != "damped") {
                schema(where + ".form", "unknown form '" + s + "' (damped, additive)");
            }
        }
        auto cert = as_schema(where, [&] {
            return std::make_unique<CompositeCertificate>(basis, static_cast<int>(nu), qs, q, b,
                                                          form);
        });
        read_common(j, where, *cert, "compact_radius");
        if (const Json* v = optional_field(j, "verified")) {
            if (!v->is_boolean()) schema(where + ".verified", "expected a boolean");
            cert->verified = v->get<bool>();
        }
        return cert;
    }
    schema(where + ".kind",
           "unknown certificate kind '" + kind + "' (quadratic, logarithmic, composite)");
}

std::unique_ptr<Certificate> load_certificate(const std::string& path) {
    return parse_certificate(parse_text(read_file(path), path));
}

//---------------------------------------------------------------------------//
// Reports
//---------------------------------------------------------------------------//

Json to_json(const SpectralReport& r) {
    Json j;
    j["n"] = r.n;
    j["rho"] = r.rho;
    j["unit_tol"] = r.unit_tol;
    j["dim_EA"] = r.dim_ea;
    j["d_max_unit"] = r.d_max_unit;
    j["stable_part_rho"] = r.stable_part_rho;
    j["ambiguous_clustering"] = r.ambiguous_clustering;
    j["merged_clusters"] = r.merged_clusters;
    Json clusters = Json::array();
    for (const auto& c : r.clusters) {
        clusters.push_back({{"re", c.value.real()},
                            {"im", c.value.imag()},
                            {"modulus", std::abs(c.value)},
                            {"algebraic", c.algebraic},
                            {"geometric", c.geometric},
                            {"block_size", c.block_size},
                            {"unit", c.unit}});
    }
    j["clusters"] = clusters;
    j["notes"] = r.notes;
    return j;
}

Json to_json(const Verdict& v) {
    Json j;
    j["outcome"] = to_string(v.outcome);
    j["certificate_advice"] = to_string(v.advice);
    j["verify_numerically"] = v.verify_numerically;
    Json trace = Json::array();
    for (const auto& s : v.trace) {
        trace.push_back({{"key", s.key},
                         {"predicate", s.predicate},
                         {"value", s.value},
                         {"threshold", s.threshold},
                         {"result", s.result}});
    }
    j["branch_trace"] = trace;
    j["rank_B"] = v.rank_b;
    j["warnings"] = v.warnings;
    j["spectrum"] = to_json(v.spectrum);
    return j;
}

Json to_json(const DriftReport& r) {
    Json j;
    j["plan"] = {{"radii", r.plan.radii},
                 {"points_per_shell", r.plan.points_per_shell},
                 {"noise_samples", r.exact ? 0 : r.plan.noise_samples},
                 {"seed", r.plan.seed},
                 {"tolerance", r.plan.tolerance}};
    j["method"] = r.exact ? "exact quadratic expectation" : "antithetic Monte-Carlo, 3 sigma";
    Json shells = Json::array();
    for (const auto& s : r.shells) shells.push_back(shell_json(s));
    j["shells"] = shells;
    j["violation_count"] = r.violations.size();
    Json listed = Json::array();
    for (std::size_t i = 0; i < r.violations.size() && i < kListedViolations; ++i) {
        const auto& v = r.violations[i];
        listed.push_back(
            {{"x", vector_json(v.x)}, {"estimate", v.estimate}, {"half_width", v.half_width}});
    }
    j["violations"] = listed;
    j["passed"] = r.passed;
    return j;
}

Json to_json(const VariantReport& r) {
    Json j;
    j["delta"] = r.delta;
    j["region"] = r.region;
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        levels.push_back({{"level", l.level},
                          {"points", l.points},
                          {"proposals", l.proposals},
                          {"acceptance", l.acceptance},
                          {"delta_hat", l.delta_hat},
                          {"epsilon_hat", l.epsilon_hat},
                          {"epsilon_sigma", l.epsilon_sigma},
                          {"worst_point_fraction", l.worst_point_fraction},
                          {"worst_x", vector_json(l.worst_x)},
                          {"h_violations", l.h_violations},
                          {"max_u_minus_h", l.max_u_minus_h}});
    }
    j["levels"] = levels;
    j["inclusion"] = {{"points", r.inclusion_points},
                      {"violations", r.inclusion_violations},
                      {"witness", r.inclusion_witness ? vector_json(*r.inclusion_witness)
                                                      : Json(nullptr)}};
    j["passed"] = r.passed;
    return j;
}

Json to_json(const ScanResult& s) {
    Json j;
    j["found"] = s.found;
    j["radius"] = s.found ? Json(s.radius) : Json(nullptr);
    Json attempts = Json::array();
    for (const auto& a : s.attempts) {
        attempts.push_back({{"radius", a.radius},
                            {"worst_second_order", a.worst_second_order},
                            {"worst_mc_upper", a.worst_mc_upper},
                            {"passed", a.passed}});
    }
    j["attempts"] = attempts;
    return j;
}

Json to_json(const DecreaseEstimate& d) {
    Json j;
    j["delta"] = d.delta;
    j["epsilon"] = d.epsilon;
    j["levels"] = d.levels;
    j["level_delta"] = d.level_delta;
    j["level_epsilon"] = d.level_epsilon;
    return j;
}

Json to_json(const EnsembleStats& s) {
    Json j;
    j["trajectories"] = s.trajectories;
    j["horizon"] = s.horizon;
    j["seed"] = s.seed;
    j["hits"] = s.hits;
    j["hit_fraction"] = s.hit_fraction;
    Json q = Json::array();
    for (const auto& h : s.quantiles) {
        q.push_back({{"q", h.q}, {"steps", h.steps ? Json(*h.steps) : Json(nullptr)}});
    }
    j["hitting_time_quantiles"] = q;
    j["divergence_threshold"] = s.divergence_threshold;
    j["divergent"] = s.divergent;
    j["overflowed"] = s.overflowed;
    j["divergence_fraction"] = s.divergence_fraction;
    if (!s.occupancy_steps.empty()) {
        j["occupancy"] = {{"steps", s.occupancy_steps}, {"counts", s.occupancy_counts}};
    }
    return j;
}

Json to_json(const DecayFit& f) {
    Json j;
    j["k_grid"] = f.k_grid;
    j["counts"] = f.counts;
    j["p_hat"] = f.p_hat;
    j["trajectories"] = f.trajectories;
    j["usable_points"] = f.usable_points;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["slope_stderr"] = f.slope_stderr;
    return j;
}

Json to_json(const BoundCheck& c) {
    Json j;
    j["i"] = c.instance.i;
    j["u"] = c.instance.u;
    j["crossing_time"] = c.instance.crossing_time();
    j["lower"] = c.instance.lower();
    j["upper"] = c.instance.upper();
    j["sequences"] = c.sequences;
    j["violations"] = c.violations;
    j["min_lower_margin"] = c.min_lower_margin;
    j["min_upper_margin"] = c.min_upper_margin;
    return j;
}

Json to_json(const PolyCandidate& c) {
    Json terms = Json::array();
    for (std::size_t l = 0; l < c.a.size(); ++l) {
        for (std::size_t k = 0; k < c.a[l].size(); ++k) {
            if (c.a[l][k] != 0.0) terms.push_back({{"l", l}, {"j", k}, {"a", c.a[l][k]}});
        }
    }
    return {{"degree", c.degree}, {"terms", terms}};
}

Json to_json(const RefutationSweep& s) {
    Json j;
    j["degree"] = s.degree;
    j["u"] = s.u;
    j["exhaustive"] = s.exhaustive;
    j["generated"] = s.generated;
    j["skipped"] = s.skipped;
    j["tested"] = s.tested;
    j["refuted"] = s.refuted;
    j["max_witness"] = s.max_witness;
    j["first_unrefuted"] = s.first_unrefuted ? to_json(*s.first_unrefuted) : Json(nullptr);
    return j;
}

Json to_json(const Example1CertificateReport& r) {
    Json j;
    j["offset"] = r.offset;
    j["compact_radius"] = r.compact_radius;
    j["scan"] = to_json(r.scan);
    j["drift"] = to_json(r.drift);
    j["decrease"] = to_json(r.decrease);
    j["variant"] = to_json(r.variant);
    j["passed"] = r.passed;
    return j;
}

Json to_json(const Example2Report& r) {
    Json j;
    Json probes = Json::array();
    for (const auto& p : r.probes) {
        probes.push_back({{"a", p.a},
                          {"b", p.b},
                          {"c", p.c},
                          {"x", p.x},
                          {"drift", p.drift},
                          {"a_over_3", p.a / 3.0}});
    }
    j["quadratic_probes"] = probes;
    j["max_abs_error"] = r.max_abs_error;
    j["all_positive"] = r.all_positive;
    j["delta"] = r.delta;
    j["epsilon_expected"] = 0.5 * (1.0 - r.delta);
    j["abs_drift"] = to_json(r.drift);
    j["abs_variant"] = to_json(r.variant);
    j["passed"] = r.passed;
    return j;
}

}  // namespace reachcert::io
