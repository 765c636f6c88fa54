//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/counterexamples.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "reachcert/error.hpp"
#include "reachcert/parallel.hpp"

namespace reachcert {

//---------------------------------------------------------------------------//
// Halving map
//---------------------------------------------------------------------------//

PolynomialSystem example1_system() {
    return make_polynomial_system({"0.5*x1*(1 + x2 + w1)", "0.5*x2"},
                                  NoiseModel::uniform_box(Vector::Ones(1)));
}

Region example1_target() {
    return {"{0 < xi < 1, 0 < eta < 1}", [](const Vector& x) {
                return x.size() == 2 && x(0) > 0.0 && x(0) < 1.0 && x(1) > 0.0 && x(1) < 1.0;
            }};
}

namespace {

void require_instance(const Example1Instance& inst) {
    require(inst.i >= 1, ErrorCode::InvalidArgument, "example 1: i must be a positive integer");
    require(std::isfinite(inst.u) && inst.u >= 1.0, ErrorCode::InvalidArgument,
            "example 1: u must be >= 1");
}

}  // namespace

Vector Example1Instance::x0() const {
    Vector x(2);
    x << std::ldexp(1.0, i), std::ldexp(u, i);
    return x;
}

double Example1Instance::lower() const {
    return i * std::log2(u) + 0.5 * i * (i + 1);
}

double Example1Instance::upper() const {
    return i * std::log2(u) + 0.5 * i * (i + 3);
}

LogState example1_log_step(const LogState& s, double w) {
    const double factor = 0.5 * (1.0 + s.eta + w);
    if (!(factor > 0.0)) {
        std::ostringstream os;
        os << "example 1: nonpositive factor (1 + eta + w) / 2 = " << factor << " at eta = "
           << s.eta << ", w = " << w;
        fail(ErrorCode::InvalidArgument, os.str());
    }
    return {s.log2_xi + std::log2(factor), 0.5 * s.eta};
}

std::vector<LogState> example1_closed_form(const Example1Instance& inst,
                                           const std::vector<double>& noise) {
    require_instance(inst);
    require(static_cast<int>(noise.size()) >= inst.crossing_time(), ErrorCode::InvalidArgument,
            "example 1: need one noise value per step up to the crossing time");
    std::vector<LogState> out;
    out.reserve(static_cast<std::size_t>(inst.i) + 1);
    double sum = 0.0;
    for (int k = 0; k <= inst.i; ++k) {
        out.push_back({inst.i + sum, std::ldexp(inst.u, inst.i - k)});
        if (k == inst.i) break;
        const double w = noise[static_cast<std::size_t>(k)];
        require(w >= -1.0 && w <= 1.0, ErrorCode::InvalidArgument,
                "example 1: noise values must lie in [-1, 1]");
        const double arg = 0.5 * (1.0 + std::ldexp(inst.u, inst.i - k) + w);
        if (!(arg > 0.0)) {
            fail(ErrorCode::InvalidArgument, "example 1: nonpositive argument to log2");
        }
        sum += std::log2(arg);
    }
    return out;
}

BoundCheck example1_check_bounds(const Example1Instance& inst, long long sequences,
                                 std::uint64_t seed) {
    require_instance(inst);
    require(sequences > 0, ErrorCode::InvalidArgument, "example 1: sequences must be positive");
    const auto n = static_cast<std::size_t>(sequences);
    std::vector<double> finals(n);
    const TrajectorySeed root{seed, 0};
    parallel_for(n, [&](std::size_t s) {
        RandomStream rng(root.child(s));
        LogState st{static_cast<double>(inst.i), std::ldexp(inst.u, inst.i)};
        for (int k = 0; k < inst.i; ++k) st = example1_log_step(st, rng.uniform(-1.0, 1.0));
        finals[s] = st.log2_xi;
    });

    BoundCheck out;
    out.instance = inst;
    out.sequences = sequences;
    out.min_lower_margin = std::numeric_limits<double>::infinity();
    out.min_upper_margin = std::numeric_limits<double>::infinity();
    const double lo = inst.lower(), hi = inst.upper();
    for (double v : finals) {
        out.min_lower_margin = std::min(out.min_lower_margin, v - lo);
        out.min_upper_margin = std::min(out.min_upper_margin, hi - v);
        if (v < lo || v > hi) ++out.violations;
    }
    return out;
}

//---------------------------------------------------------------------------//
// Polynomial refutation
//---------------------------------------------------------------------------//

PolyCandidate PolyCandidate::zero(int degree) {
    require(degree >= 1, ErrorCode::InvalidArgument, "polynomial candidate: degree must be >= 1");
    PolyCandidate c;
    c.degree = degree;
    c.a.resize(static_cast<std::size_t>(degree) + 1);
    for (int l = 0; l <= degree; ++l) c.a[static_cast<std::size_t>(l)].assign(degree - l + 1, 0.0);
    return c;
}

bool PolyCandidate::radially_unbounded() const {
    for (std::size_t l = 1; l < a.size(); ++l) {
        for (double v : a[l]) {
            if (v != 0.0) return true;
        }
    }
    return false;
}

bool PolyCandidate::grows_along(double u) const {
    for (int l = static_cast<int>(a.size()) - 1; l >= 0; --l) {
        double p = 0.0, power = 1.0;
        for (double v : a[static_cast<std::size_t>(l)]) {
            p += v * power;
            power *= u;
        }
        if (p != 0.0) return l > 0 && p > 0.0;
    }
    return false;
}

double PolyCandidate::eval(double xi, double eta) const {
    double total = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        for (std::size_t j = 0; j < a[l].size(); ++j) {
            total += a[l][j] * std::pow(xi, static_cast<double>(l)) *
                     std::pow(eta, static_cast<double>(j));
        }
    }
    return total;
}

namespace {

struct Term {
    double exponent;  // log2 of the magnitude factor
    long double coef;
};

void check_candidate(const PolyCandidate& c) {
    require(c.degree >= 1 && static_cast<int>(c.a.size()) == c.degree + 1,
            ErrorCode::InvalidArgument, "polynomial candidate: coefficient rows do not match degree");
    for (int l = 0; l <= c.degree; ++l) {
        require(static_cast<int>(c.a[static_cast<std::size_t>(l)].size()) == c.degree - l + 1,
                ErrorCode::InvalidArgument,
                "polynomial candidate: coefficient row length does not match degree");
    }
}

/// Sign of sum coef * 2^exponent; terms are merged by exact exponent and
/// accumulated relative to the largest one.
int signed_log_sum(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.exponent > y.exponent; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms.size(); ++r) {
        if (w > 0 && terms[w - 1].exponent == terms[r].exponent) {
            terms[w - 1].coef += terms[r].coef;
        } else {
            terms[w++] = terms[r];
        }
    }
    terms.resize(w);
    terms.erase(std::remove_if(terms.begin(), terms.end(),
                               [](const Term& t) { return t.coef == 0.0L; }),
                terms.end());
    if (terms.empty()) return 0;
    const double top = terms.front().exponent;
    long double sum = 0.0L;
    for (const auto& t : terms) sum += t.coef * std::exp2l(static_cast<long double>(t.exponent - top));
    return sum > 0.0L ? 1 : (sum < 0.0L ? -1 : 0);
}

}  // namespace

std::optional<int> refute_polynomial_drift(const PolyCandidate& candidate, double u, int i_max) {
    check_candidate(candidate);
    require(std::isfinite(u) && u >= 1.0, ErrorCode::InvalidArgument, "refutation: u must be >= 1");
    require(i_max >= 1, ErrorCode::InvalidArgument, "refutation: i_max must be >= 1");
    require(candidate.radially_unbounded(), ErrorCode::InvalidArgument,
            "refutation: candidate is not radially unbounded (no nonzero coefficient with a "
            "positive power of xi)");
    const double lu = std::log2(u);
    std::vector<Term> terms;
    for (int i = 1; i <= i_max; ++i) {
        terms.clear();
        const double tri = 0.5 * i * (i + 1);
        for (int l = 0; l <= candidate.degree; ++l) {
            const auto& row = candidate.a[static_cast<std::size_t>(l)];
            for (int j = 0; j < static_cast<int>(row.size()); ++j) {
                const double a = row[static_cast<std::size_t>(j)];
                if (a == 0.0) continue;
                // V(u^i 2^{i(i+1)/2}, u) - V(2^i, 2^i u)
                terms.push_back({(i * l + j) * lu + l * tri, static_cast<long double>(a)});
                terms.push_back({static_cast<double>(i * l + i * j) + j * lu,
                                 -static_cast<long double>(a)});
            }
        }
        if (signed_log_sum(terms) > 0) return i;
    }
    return std::nullopt;
}

RefutationSweep refutation_sweep(int degree, double u, int i_max, bool exhaustive,
                                 long long samples, std::uint64_t seed) {
    PolyCandidate base = PolyCandidate::zero(degree);
    std::vector<std::pair<int, int>> slots;
    for (int l = 0; l <= degree; ++l) {
        for (int j = 0; j <= degree - l; ++j) slots.emplace_back(l, j);
    }
    const int m = static_cast<int>(slots.size());
    long long total = samples;
    if (exhaustive) {
        total = 1;
        for (int k = 0; k < m; ++k) {
            require(total < (1LL << 40), ErrorCode::InvalidArgument,
                    "refutation sweep: exhaustive family too large");
            total *= 5;
        }
    }
    require(total > 0, ErrorCode::InvalidArgument, "refutation sweep: no candidates requested");

    const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(total), 256);
    struct Partial {
        long long skipped = 0, tested = 0, refuted = 0;
        int max_witness = 0;
        long long first_unrefuted = -1;
        std::optional<PolyCandidate> unrefuted;
    };
    std::vector<Partial> parts(chunks);
    const TrajectorySeed root{seed, 0};
    parallel_for(chunks, [&](std::size_t c) {
        Partial& p = parts[c];
        PolyCandidate cand = base;
        const long long begin = total * static_cast<long long>(c) / static_cast<long long>(chunks);
        const long long end =
            total * static_cast<long long>(c + 1) / static_cast<long long>(chunks);
        RandomStream rng(root.child(c));
        for (long long idx = begin; idx < end; ++idx) {
            long long code = idx;
            for (int k = 0; k < m; ++k) {
                int digit;
                if (exhaustive) {
                    digit = static_cast<int>(code % 5);
                    code /= 5;
                } else {
                    digit = static_cast<int>(rng.engine()() % 5);
                }
                cand.a[static_cast<std::size_t>(slots[k].first)]
                      [static_cast<std::size_t>(slots[k].second)] = digit - 2;
            }
            if (!cand.radially_unbounded() || !cand.grows_along(u)) {
                ++p.skipped;
                continue;
            }
            ++p.tested;
            const auto witness = refute_polynomial_drift(cand, u, i_max);
            if (witness) {
                ++p.refuted;
                p.max_witness = std::max(p.max_witness, *witness);
            } else if (!p.unrefuted) {
                p.unrefuted = cand;
                p.first_unrefuted = idx;
            }
        }
    });

    RefutationSweep out;
    out.degree = degree;
    out.u = u;
    out.exhaustive = exhaustive;
    out.generated = total;
    for (auto& p : parts) {
        out.skipped += p.skipped;
        out.tested += p.tested;
        out.refuted += p.refuted;
        out.max_witness = std::max(out.max_witness, p.max_witness);
        if (p.unrefuted && !out.first_unrefuted) out.first_unrefuted = std::move(p.unrefuted);
    }
    return out;
}

//---------------------------------------------------------------------------//
// Logarithmic certificate for the halving map
//---------------------------------------------------------------------------//

double example1_corrected_offset() { return std::log(1.5); }

std::unique_ptr<FunctionCertificate> example1_log_certificate(double offset) {
    require(std::isfinite(offset) && offset > 0.0, ErrorCode::InvalidArgument,
            "example 1 certificate: offset must be positive");
    FunctionCertificate::Parts parts;
    parts.dim = 2;
    parts.drift = [](const Vector& x) { return std::log1p(x(0)) + x(1) * x(1); };
    parts.variant = [offset](const Vector& x) {
        return std::log1p(x(0)) + x(1) * x(1) - offset;
    };
    parts.variant_bound = [offset](double r) { return r - offset; };
    parts.drift_floor = 0.0;
    parts.propose = [](double r, RandomStream& rng, Vector& out) {
        if (!(r > 0.0)) return 0.0;
        out.resize(2);
        const double xi_max = std::expm1(r), eta_max = std::sqrt(r);
        do {
            out(0) = rng.uniform(0.0, xi_max);
        } while (!(out(0) > 0.0));
        do {
            out(1) = rng.uniform(0.0, eta_max);
        } while (!(out(1) > 0.0));
        return xi_max * eta_max;
    };
    parts.shell_norm = [](const Vector& x) { return x.norm(); };
    parts.shell_point = [](double r, RandomStream& rng) {
        double theta;
        do {
            theta = rng.uniform(0.0, 0.5 * std::numbers::pi);
        } while (!(theta > 0.0));
        Vector x(2);
        x << r * std::cos(theta), r * std::sin(theta);
        return x;
    };
    auto cert = std::make_unique<FunctionCertificate>(std::move(parts));
    std::ostringstream os;
    os << "V = ln(1 + xi) + eta^2, U = V - " << offset << " on the open positive quadrant";
    cert->add_note(os.str());
    return cert;
}

namespace {

std::vector<double> custom_levels(const Certificate& cert, double offset) {
    std::vector<double> levels = default_variant_levels(cert);
    const double floor_level = offset + 1.0;
    if (levels.front() < floor_level) {
        const double s = floor_level / levels.front();
        for (double& l : levels) l *= s;
    }
    return levels;
}

}  // namespace

Example1CertificateReport example1_verify_log_certificate(double offset, long long samples,
                                                          std::uint64_t seed) {
    require(samples >= 100, ErrorCode::InvalidArgument,
            "example 1 certificate: at least 100 noise samples per point");
    const System system = example1_system();
    auto cert = example1_log_certificate(offset);

    Example1CertificateReport rep;
    rep.offset = offset;
    ScanOptions scan;
    scan.start = 1.0;
    scan.mc_samples = samples;
    scan.seed = seed;
    rep.scan = scan_compact_radius(system, *cert, scan);
    if (!rep.scan.found) {
        fail(ErrorCode::NoCertificate,
             "example 1 certificate: no compact radius found below the scan cap");
    }
    cert->set_compact_radius(rep.scan.radius);
    rep.compact_radius = rep.scan.radius;

    DriftPlan plan = default_drift_plan(*cert, seed);
    plan.noise_samples = samples;
    rep.drift = verify_drift(system, *cert, plan);

    const std::vector<double> levels = custom_levels(*cert, offset);
    rep.decrease = estimate_decrease(system, *cert, levels, 256, 64, seed);
    cert->set_decrease(rep.decrease.delta);
    cert->set_probability(rep.decrease.epsilon);

    VariantPlan vplan;
    vplan.levels = levels;
    vplan.seed = seed + 1;
    rep.variant = verify_variant(system, *cert, example1_target(), vplan);
    rep.passed = rep.drift.passed && rep.variant.passed;
    return rep;
}

//---------------------------------------------------------------------------//
// Random walk
//---------------------------------------------------------------------------//

LinearSystem example2_system() {
    return make_linear_system(Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                              NoiseModel::uniform_box(Vector::Ones(1)));
}

TargetBall example2_target() { return make_target(Vector::Zero(1), 2.0); }

double exact_affine_quadratic_drift(const LinearSystem& system, const Matrix& q, const Vector& g,
                                    const Vector& x) {
    require(g.size() == system.state_dim(), ErrorCode::DimensionMismatch,
            "affine quadratic drift: linear term dimension mismatch");
    const Vector shift = system.a * x - x;
    return exact_quadratic_drift(system, q, x) + g.dot(shift);
}

std::unique_ptr<FunctionCertificate> example2_abs_certificate(double delta) {
    FunctionCertificate::Parts parts;
    parts.dim = 1;
    parts.drift = [](const Vector& x) { return std::abs(x(0)); };
    parts.variant = [](const Vector& x) { return std::abs(x(0)) - 1.0; };
    parts.variant_bound = [](double r) { return r - 1.0; };
    parts.drift_floor = 0.0;
    parts.propose = [](double r, RandomStream& rng, Vector& out) {
        if (!(r > 0.0)) return 0.0;
        out.resize(1);
        out(0) = rng.uniform(-r, r);
        return 2.0 * r;
    };
    auto cert = std::make_unique<FunctionCertificate>(std::move(parts));
    cert->set_compact_radius(1.0);
    cert->set_decrease(delta);
    cert->set_probability(0.5 * (1.0 - delta));
    cert->add_note("V = |x|, U = |x| - 1, C = [-1, 1]");
    return cert;
}

Example2Report example2_quadratic_failure(long long samples, std::uint64_t seed) {
    const LinearSystem system = example2_system();
    Example2Report rep;
    rep.all_positive = true;
    const std::vector<std::array<double, 3>> coeffs = {
        {1.0, 0.0, 0.0}, {2.0, -5.0, 7.0}, {0.5, 3.0, -1.0}, {0.1, -2.0, 0.0}, {10.0, 1.0, 4.0}};
    for (const auto& abc : coeffs) {
        for (double x : {-10.0, -1.0, 0.0, 0.5, 2.5, 100.0}) {
            QuadraticProbe p{abc[0], abc[1], abc[2], x, 0.0};
            p.drift = exact_affine_quadratic_drift(system, Matrix::Constant(1, 1, p.a),
                                                   Vector::Constant(1, p.b),
                                                   Vector::Constant(1, x));
            rep.max_abs_error = std::max(rep.max_abs_error, std::abs(p.drift - p.a / 3.0));
            rep.all_positive = rep.all_positive && p.drift > 0.0;
            rep.probes.push_back(p);
        }
    }

    auto cert = example2_abs_certificate(rep.delta);
    rep.drift = verify_drift(system, *cert, default_drift_plan(*cert, seed));
    VariantPlan vplan;
    vplan.levels = {2.0, 4.0, 8.0};
    vplan.noise_per_point = 200;
    vplan.points_per_level = static_cast<int>(std::max<long long>(1, samples / 200));
    vplan.seed = seed;
    rep.variant = verify_variant(system, *cert, region_of(example2_target()), vplan);
    rep.passed = rep.all_positive && rep.max_abs_error < 1e-12 && rep.drift.passed &&
                 rep.variant.passed;
    return rep;
}

}  // namespace reachcert
