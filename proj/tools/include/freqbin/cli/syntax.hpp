// Copyright 2026 The freqbin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FREQBIN_CLI_SYNTAX_HPP
#define FREQBIN_CLI_SYNTAX_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace freqbin::cli {

enum class TokenKind { Ident, Number, String, Punct, Newline, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number = 0.0;
    int line = 0;
};

/// Thrown for malformed input; carries the 1-based line.
class SyntaxError : public std::runtime_error {
   public:
    SyntaxError(int line, const std::string &message)
        : std::runtime_error(message), line_(line) {
    }
    int line() const noexcept {
        return line_;
    }

   private:
    int line_;
};

/// Splits text into tokens. `#` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Arithmetic over named real parameters: + - * / ^, unary minus,
/// parentheses, the constant `pi` and sqrt/sin/cos/tan/exp/log/abs/atan2.
struct Expr {
    enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Op op = Op::Number;
    double number = 0.0;
    std::string name;
    std::vector<ExprPtr> args;
    int line = 0;

    /// The identifier if this expression is a bare name, else empty.
    std::string bare_name() const {
        return op == Op::Var ? name : std::string();
    }
};

using Environment = std::map<std::string, double>;

double evaluate(const Expr &expr, const Environment &env);

/// Stream over tokens with the expression grammar built in.
class TokenStream {
   public:
    explicit TokenStream(std::vector<Token> tokens);

    const Token &peek(std::size_t ahead = 0) const;
    Token next();
    bool at_punct(std::string_view p) const;
    bool accept_punct(std::string_view p);
    void expect_punct(std::string_view p);
    void skip_newlines();
    bool at_end() const;
    std::size_t position() const {
        return pos_;
    }
    void seek(std::size_t pos) {
        pos_ = pos < tokens_.size() ? pos : tokens_.size() - 1;
    }

    ExprPtr parse_expression();

   private:
    ExprPtr parse_sum();
    ExprPtr parse_product();
    ExprPtr parse_unary();
    ExprPtr parse_power();
    ExprPtr parse_primary();

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

/// Parses and evaluates a standalone expression such as `pi/4` or `2*b`.
double evaluate_text(std::string_view text, const Environment &env = {});

}  // namespace freqbin::cli

#endif
