//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reachcert.h"

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Args {
    std::string system;
    std::string certificate;
    std::string out;
    std::string target_center;
    std::string x0;
    std::string repro_target;
    double target_radius = 0.0;
    std::uint64_t seed = 1;
    long long samples = 0;
    long long horizon = 0;
    long long trajectories = 0;
    double unit_tol = 0.0;
    double rank_tol = 0.0;
    bool csv = false;
    bool timings = false;
};

/// Status carried out of a failing C call.
struct Failure {
    reachcert_status status;
    std::string message;
};

void check(reachcert_status st) {
    if (st != REACHCERT_OK) throw Failure{st, reachcert_last_error()};
}

int exit_code_of(reachcert_status st) {
    switch (st) {
        case REACHCERT_INVALID_ARGUMENT:
        case REACHCERT_DIMENSION_MISMATCH:
        case REACHCERT_PRECONDITION:
        case REACHCERT_SCHEMA:
        case REACHCERT_NO_CERTIFICATE:
        case REACHCERT_IO: return kExitUsage;
        default: return kExitFail;
    }
}

/// Owns a string returned by the library.
class Owned {
  public:
    Owned() = default;
    Owned(const Owned&) = delete;
    Owned& operator=(const Owned&) = delete;
    ~Owned() { reachcert_string_free(p_); }
    char** out() { return &p_; }
    std::string str() const { return p_ ? p_ : ""; }
    Json json() const { return Json::parse(str()); }

  private:
    char* p_ = nullptr;
};

template <class T, void (*Free)(T*)>
class Handle {
  public:
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p_); }
    T** out() { return &p_; }
    T* get() const { return p_; }

  private:
    T* p_ = nullptr;
};

using SystemHandle = Handle<reachcert_system, reachcert_system_free>;
using CertificateHandle = Handle<reachcert_certificate, reachcert_certificate_free>;

std::vector<double> parse_csv(const std::string& text, const char* flag) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (item.empty() || used != item.size() || !std::isfinite(x)) {
            throw Failure{REACHCERT_INVALID_ARGUMENT,
                          std::string(flag) + ": '" + item + "' is not a finite number"};
        }
        v.push_back(x);
    }
    if (v.empty()) throw Failure{REACHCERT_INVALID_ARGUMENT, std::string(flag) + " is empty"};
    return v;
}

std::string sha256(const std::string& path) {
    Owned hex;
    check(reachcert_sha256_file(path.c_str(), hex.out()));
    return hex.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{REACHCERT_IO, "cannot write '" + path.string() + "'"};
    out << content;
    if (!out) throw Failure{REACHCERT_IO, "cannot write '" + path.string() + "'"};
}

class Runner {
  public:
    Runner(std::string command, const Args& args) : command_(std::move(command)), args_(args) {
        reachcert_options_init(&opts_);
        if (args.unit_tol > 0.0) opts_.unit_tol = args.unit_tol;
        if (args.rank_tol > 0.0) opts_.rank_tol = args.rank_tol;
        opts_.seed = args.seed;
        opts_.samples = args.samples;
        opts_.horizon = args.horizon;
        opts_.trajectories = args.trajectories;
        opts_.target_radius = args.target_radius;
        if (!args.target_center.empty()) {
            center_ = parse_csv(args.target_center, "--target-center");
            opts_.target_center = center_.data();
            opts_.target_center_len = center_.size();
        }
        if (!args.x0.empty()) {
            x0_ = parse_csv(args.x0, "--x0");
            opts_.x0 = x0_.data();
            opts_.x0_len = x0_.size();
        }
        if (args.csv && args.out.empty()) {
            throw Failure{REACHCERT_INVALID_ARGUMENT, "--csv requires --out"};
        }
        if (!args.out.empty()) {
            std::error_code ec;
            fs::create_directories(args.out, ec);
            if (ec) throw Failure{REACHCERT_IO, "cannot create '" + args.out + "': " + ec.message()};
        }
    }

    int run() {
        const auto start = std::chrono::steady_clock::now();
        Json result;
        bool passed = true;
        if (command_ == "repro") {
            Owned report;
            int ok = 0;
            check(reachcert_repro(args_.repro_target.c_str(), &opts_, &ok, report.out()));
            result = report.json();
            passed = ok != 0;
        } else {
            input_["system"] = {{"path", args_.system}, {"sha256", sha256(args_.system)}};
            SystemHandle system;
            check(reachcert_system_load(args_.system.c_str(), system.out()));
            if (command_ == "classify") {
                result = classify(system.get());
            } else if (command_ == "certify") {
                result = certify(system.get(), passed);
            } else if (command_ == "verify") {
                result = verify(system.get(), passed);
            } else {
                result = simulate(system.get());
            }
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit(result, passed, seconds);
        return passed ? kExitPass : kExitFail;
    }

  private:
    Json classify(reachcert_system* system) {
        Owned report;
        check(reachcert_classify(system, &opts_, report.out()));
        Json j = report.json();
        if (args_.csv) {
            std::ostringstream os;
            os << "key,predicate,value,threshold,result\n";
            for (const auto& s : j["verdict"]["branch_trace"]) {
                os << s["key"].get<std::string>() << ",\"" << s["predicate"].get<std::string>()
                   << "\"," << s["value"].dump() << "," << s["threshold"].dump() << ","
                   << (s["result"].get<bool>() ? "true" : "false") << "\n";
            }
            write_file(fs::path(args_.out) / "branch_trace.csv", os.str());
        }
        return j;
    }

    Json certify(reachcert_system* system, bool& passed) {
        Owned report;
        CertificateHandle cert;
        int ok = 0;
        check(reachcert_certify(system, &opts_, cert.out(), &ok, report.out()));
        passed = ok != 0;
        Owned cert_json;
        check(reachcert_certificate_to_json(cert.get(), cert_json.out()));
        if (!args_.certificate.empty()) write_file(args_.certificate, cert_json.str());
        if (!args_.out.empty()) write_file(fs::path(args_.out) / "certificate.json", cert_json.str());
        return report.json();
    }

    Json verify(reachcert_system* system, bool& passed) {
        if (args_.certificate.empty()) {
            throw Failure{REACHCERT_INVALID_ARGUMENT, "verify requires --certificate"};
        }
        input_["certificate"] = {{"path", args_.certificate},
                                 {"sha256", sha256(args_.certificate)}};
        CertificateHandle cert;
        check(reachcert_certificate_load(args_.certificate.c_str(), cert.out()));
        Owned report;
        int ok = 0;
        check(reachcert_verify(system, cert.get(), &opts_, &ok, report.out()));
        passed = ok != 0;
        return report.json();
    }

    Json simulate(reachcert_system* system) {
        Owned report;
        check(reachcert_simulate(system, &opts_, report.out()));
        if (args_.csv) {
            Owned csv;
            check(reachcert_trajectory_csv(system, &opts_, csv.out()));
            write_file(fs::path(args_.out) / "trajectory.csv", csv.str());
        }
        return report.json();
    }

    void emit(const Json& result, bool passed, double seconds) {
        Json j;
        j["tool"] = "reachcert";
        j["version"] = reachcert_version();
        j["command"] = command_;
        if (!input_.empty()) j["input"] = input_;
        j["settings"] = {{"seed", opts_.seed},
                         {"samples", opts_.samples},
                         {"horizon", opts_.horizon},
                         {"trajectories", opts_.trajectories},
                         {"unit_tol", opts_.unit_tol},
                         {"rank_tol", opts_.rank_tol}};
        j["result"] = result;
        j["passed"] = passed;
        if (args_.timings) j["timings"] = {{"wall_seconds", seconds}};
        const std::string text = j.dump(2) + "\n";
        std::cout << text;
        if (!args_.out.empty()) write_file(fs::path(args_.out) / (command_ + ".json"), text);
    }

    std::string command_;
    const Args& args_;
    reachcert_options opts_{};
    std::vector<double> center_, x0_;
    Json input_ = Json::object();
};

void add_common(CLI::App* cmd, Args& a, bool needs_system) {
    if (needs_system) {
        cmd->add_option("--system", a.system, "system JSON file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--target-radius", a.target_radius, "target ball radius")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--target-center", a.target_center, "target ball center, comma separated");
        cmd->add_option("--unit-tol", a.unit_tol, "unit-circle band half-width")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--rank-tol", a.rank_tol, "relative rank tolerance")
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--seed", a.seed, "base random seed");
    cmd->add_option("--samples", a.samples, "Monte-Carlo sample count")->check(CLI::PositiveNumber);
    cmd->add_option("--out", a.out, "directory for report files");
    cmd->add_flag("--csv", a.csv, "also write CSV tables to --out");
    cmd->add_flag("--timings", a.timings, "include wall-clock timings in the report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost-sure reachability analysis for stochastic linear and polynomial systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(reachcert_version()));
    Args args;

    auto* classify = app.add_subcommand("classify", "classify a linear system");
    add_common(classify, args, true);

    auto* certify = app.add_subcommand("certify", "synthesize and verify a certificate");
    add_common(certify, args, true);
    certify->add_option("--certificate", args.certificate, "where to write the certificate");

    auto* verify = app.add_subcommand("verify", "verify a certificate numerically");
    add_common(verify, args, true);
    verify->add_option("--certificate", args.certificate, "certificate JSON file")
        ->required()
        ->check(CLI::ExistingFile);

    auto* simulate = app.add_subcommand("simulate", "estimate hitting statistics");
    add_common(simulate, args, true);
    simulate->add_option("--horizon", args.horizon, "steps per trajectory")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--trajectories", args.trajectories, "number of trajectories")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--x0", args.x0, "initial state, comma separated");

    auto* repro = app.add_subcommand("repro", "reproduce a worked example");
    add_common(repro, args, false);
    repro->add_option("target", args.repro_target,
                      "example1-bounds | example1-certificate | example1-refute | example2")
        ->required()
        ->check(CLI::IsMember(
            {"example1-bounds", "example1-certificate", "example1-refute", "example2"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Runner runner(command, args);
        return runner.run();
    } catch (const Failure& f) {
        std::cerr << "reachcert: " << reachcert_status_name(f.status) << ": " << f.message << "\n";
        return exit_code_of(f.status);
    } catch (const std::exception& e) {
        std::cerr << "reachcert: " << e.what() << "\n";
        return kExitFail;
    }
}
