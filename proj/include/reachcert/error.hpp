//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>

namespace reachcert {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonFinite,
    NonConvergence,
    IllConditioned,
    Precondition,
    Schema,
    NoCertificate,
    InsufficientData,
    Io,
};

const char* to_string(ErrorCode code);

/// Every failure the core reports carries one of the codes above; the C API
/// maps them one-to-one onto status values.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace reachcert
