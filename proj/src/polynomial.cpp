//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include "reachcert/polynomial.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "reachcert/error.hpp"

namespace reachcert {

class PolynomialParser {
  public:
    PolynomialParser(std::string_view text, int state_dim, int noise_dim)
        : text_(text), state_dim_(state_dim), noise_dim_(noise_dim) {}

    Polynomial run() {
        Polynomial p;
        p.source_ = std::string(text_);
        out_ = &p.program_;
        expr();
        skip_ws();
        if (pos_ != text_.size()) error("unexpected trailing input");
        if (out_->empty()) error("empty expression");
        p.max_stack_ = max_depth_;
        return p;
    }

  private:
    using Op = Polynomial::Op;

    [[noreturn]] void error(const std::string& msg) const {
        std::ostringstream os;
        os << "polynomial \"" << text_ << "\" at offset " << pos_ << ": " << msg;
        fail(ErrorCode::Schema, os.str());
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    // Accepts ASCII '-' and the UTF-8 minus sign U+2212.
    bool eat_minus() {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void emit(Op op, double value = 0.0, int index = 0) {
        out_->push_back({op, value, index});
        switch (op) {
            case Op::Const:
            case Op::State:
            case Op::Noise: ++depth_; break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul: --depth_; break;
            case Op::Neg:
            case Op::Pow: break;
        }
        max_depth_ = std::max(max_depth_, depth_);
    }

    void expr() {
        term();
        for (;;) {
            if (eat('+')) {
                term();
                emit(Op::Add);
            } else if (eat_minus()) {
                term();
                emit(Op::Sub);
            } else {
                return;
            }
        }
    }

    void term() {
        unary();
        while (eat('*')) {
            unary();
            emit(Op::Mul);
        }
    }

    void unary() {
        if (eat_minus()) {
            unary();
            emit(Op::Neg);
        } else if (eat('+')) {
            unary();
        } else {
            power();
        }
    }

    void power() {
        primary();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) error("exponent must be a non-negative integer literal");
            int k = 0;
            auto res = std::from_chars(text_.data() + start, text_.data() + pos_, k);
            if (res.ec != std::errc{} || k > 64) error("exponent out of range");
            emit(Op::Pow, 0.0, k);
        }
    }

    void primary() {
        skip_ws();
        if (pos_ >= text_.size()) error("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            expr();
            if (!eat(')')) error("expected ')'");
            return;
        }
        if (c == 'x' || c == 'w') {
            ++pos_;
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) error("variable needs a 1-based index");
            int idx = 0;
            std::from_chars(text_.data() + start, text_.data() + pos_, idx);
            int limit = c == 'x' ? state_dim_ : noise_dim_;
            if (idx < 1 || idx > limit) {
                error(std::string("variable ") + c + std::to_string(idx) + " out of range");
            }
            emit(c == 'x' ? Op::State : Op::Noise, 0.0, idx - 1);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
                ++pos_;
            }
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t save = pos_++;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
                std::size_t digits = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
                if (digits == pos_) pos_ = save;
            }
            double v = 0.0;
            auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
            if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) error("bad numeric literal");
            emit(Op::Const, v);
            return;
        }
        error(std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    int state_dim_;
    int noise_dim_;
    std::size_t pos_ = 0;
    std::vector<Polynomial::Instr>* out_ = nullptr;
    int depth_ = 0;
    int max_depth_ = 0;
};

Polynomial Polynomial::parse(std::string_view text, int state_dim, int noise_dim) {
    return PolynomialParser(text, state_dim, noise_dim).run();
}

double Polynomial::eval(const Vector& x, const Vector& w) const {
    double stack[64] = {};
    double* heap = nullptr;
    std::vector<double> big;
    if (max_stack_ > 64) {
        big.resize(max_stack_);
        heap = big.data();
    }
    double* s = heap ? heap : stack;
    int top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
            case Op::Const: s[top++] = in.value; break;
            case Op::State: s[top++] = x[in.index]; break;
            case Op::Noise: s[top++] = w[in.index]; break;
            case Op::Add: --top; s[top - 1] += s[top]; break;
            case Op::Sub: --top; s[top - 1] -= s[top]; break;
            case Op::Mul: --top; s[top - 1] *= s[top]; break;
            case Op::Neg: s[top - 1] = -s[top - 1]; break;
            case Op::Pow: {
                double base = s[top - 1], acc = 1.0;
                for (int k = 0; k < in.index; ++k) acc *= base;
                s[top - 1] = acc;
                break;
            }
        }
    }
    return s[0];
}

}  // namespace reachcert
