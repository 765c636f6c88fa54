//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "reachcert/linalg.hpp"

namespace reachcert {

/*!
 * Polynomial expression in state symbols x1..xn and noise symbols w1..wm.
 *
 * Parsed from text with + - * ^ (non-negative integer exponents), parentheses
 * and decimal literals. The tree is flattened into a postfix program so that
 * evaluation inside simulation loops does not chase pointers.
 */
class Polynomial {
  public:
    static Polynomial parse(std::string_view text, int state_dim, int noise_dim);

    double eval(const Vector& x, const Vector& w) const;

    const std::string& source() const { return source_; }

  private:
    enum class Op { Const, State, Noise, Add, Sub, Mul, Neg, Pow };
    struct Instr {
        Op op;
        double value = 0.0;
        int index = 0;
    };
    friend class PolynomialParser;

    std::string source_;
    std::vector<Instr> program_;
    int max_stack_ = 0;
};

}  // namespace reachcert
