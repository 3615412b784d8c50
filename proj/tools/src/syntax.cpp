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

#include "freqbin/cli/syntax.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace freqbin::cli;

std::vector<Token> freqbin::cli::tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    auto push = [&](TokenKind kind, std::string t, double num = 0.0) {
        out.push_back(Token{kind, std::move(t), num, line});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            push(TokenKind::Newline, "\\n");
            ++line;
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            push(TokenKind::Ident, std::string(text.substr(i, j - i)));
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::string buf(text.substr(i, std::min<std::size_t>(64, text.size() - i)));
            char *end = nullptr;
            double v = std::strtod(buf.c_str(), &end);
            std::size_t len = static_cast<std::size_t>(end - buf.c_str());
            push(TokenKind::Number, buf.substr(0, len), v);
            i += len;
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '"' && text[j] != '\n') {
                ++j;
            }
            if (j >= text.size() || text[j] != '"') {
                throw SyntaxError(line, "unterminated string literal");
            }
            push(TokenKind::String, std::string(text.substr(i + 1, j - i - 1)));
            i = j + 1;
        } else if (std::string_view("{}[](),=:@+-*/^;").find(c) != std::string_view::npos) {
            push(TokenKind::Punct, std::string(1, c));
            ++i;
        } else {
            throw SyntaxError(line, std::string("unexpected character '") + c + "'");
        }
    }
    push(TokenKind::End, "end of input");
    return out;
}

namespace {

double call(const std::string &fn, const std::vector<double> &a, int line) {
    auto need = [&](std::size_t n) {
        if (a.size() != n) {
            throw SyntaxError(line, fn + "() takes " + std::to_string(n) + " argument(s)");
        }
    };
    if (fn == "sqrt") {
        need(1);
        return std::sqrt(a[0]);
    }
    if (fn == "sin") {
        need(1);
        return std::sin(a[0]);
    }
    if (fn == "cos") {
        need(1);
        return std::cos(a[0]);
    }
    if (fn == "tan") {
        need(1);
        return std::tan(a[0]);
    }
    if (fn == "exp") {
        need(1);
        return std::exp(a[0]);
    }
    if (fn == "log") {
        need(1);
        return std::log(a[0]);
    }
    if (fn == "abs") {
        need(1);
        return std::abs(a[0]);
    }
    if (fn == "atan2") {
        need(2);
        return std::atan2(a[0], a[1]);
    }
    throw SyntaxError(line, "unknown function '" + fn + "'");
}

std::shared_ptr<Expr> make(Expr::Op op, int line, std::vector<ExprPtr> args = {}) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->line = line;
    e->args = std::move(args);
    return e;
}

}  // namespace

double freqbin::cli::evaluate(const Expr &e, const Environment &env) {
    switch (e.op) {
        case Expr::Op::Number:
            return e.number;
        case Expr::Op::Var: {
            if (e.name == "pi") {
                return std::numbers::pi;
            }
            auto it = env.find(e.name);
            if (it == env.end()) {
                throw SyntaxError(e.line, "unknown parameter '" + e.name + "'");
            }
            return it->second;
        }
        case Expr::Op::Neg:
            return -evaluate(*e.args[0], env);
        case Expr::Op::Add:
            return evaluate(*e.args[0], env) + evaluate(*e.args[1], env);
        case Expr::Op::Sub:
            return evaluate(*e.args[0], env) - evaluate(*e.args[1], env);
        case Expr::Op::Mul:
            return evaluate(*e.args[0], env) * evaluate(*e.args[1], env);
        case Expr::Op::Div:
            return evaluate(*e.args[0], env) / evaluate(*e.args[1], env);
        case Expr::Op::Pow:
            return std::pow(evaluate(*e.args[0], env), evaluate(*e.args[1], env));
        case Expr::Op::Call: {
            std::vector<double> vals;
            for (const auto &a : e.args) {
                vals.push_back(evaluate(*a, env));
            }
            return call(e.name, vals, e.line);
        }
    }
    return 0.0;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::End) {
        tokens_.push_back(Token{TokenKind::End, "end of input", 0.0, tokens_.empty() ? 1 : tokens_.back().line});
    }
}

const Token &TokenStream::peek(std::size_t ahead) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token TokenStream::next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) {
        ++pos_;
    }
    return t;
}

bool TokenStream::at_punct(std::string_view p) const {
    return peek().kind == TokenKind::Punct && peek().text == p;
}

bool TokenStream::accept_punct(std::string_view p) {
    if (at_punct(p)) {
        next();
        return true;
    }
    return false;
}

void TokenStream::expect_punct(std::string_view p) {
    if (!accept_punct(p)) {
        throw SyntaxError(peek().line, "expected '" + std::string(p) + "' but found '" + peek().text + "'");
    }
}

void TokenStream::skip_newlines() {
    while (peek().kind == TokenKind::Newline) {
        next();
    }
}

bool TokenStream::at_end() const {
    return peek().kind == TokenKind::End;
}

ExprPtr TokenStream::parse_expression() {
    return parse_sum();
}

ExprPtr TokenStream::parse_sum() {
    ExprPtr lhs = parse_product();
    while (at_punct("+") || at_punct("-")) {
        Token op = next();
        lhs = make(op.text == "+" ? Expr::Op::Add : Expr::Op::Sub, op.line, {lhs, parse_product()});
    }
    return lhs;
}

ExprPtr TokenStream::parse_product() {
    ExprPtr lhs = parse_unary();
    while (at_punct("*") || at_punct("/")) {
        Token op = next();
        lhs = make(op.text == "*" ? Expr::Op::Mul : Expr::Op::Div, op.line, {lhs, parse_unary()});
    }
    return lhs;
}

ExprPtr TokenStream::parse_unary() {
    if (at_punct("-")) {
        int line = next().line;
        return make(Expr::Op::Neg, line, {parse_unary()});
    }
    if (accept_punct("+")) {
        return parse_unary();
    }
    return parse_power();
}

ExprPtr TokenStream::parse_power() {
    ExprPtr base = parse_primary();
    if (at_punct("^")) {
        int line = next().line;
        return make(Expr::Op::Pow, line, {base, parse_unary()});
    }
    return base;
}

ExprPtr TokenStream::parse_primary() {
    const Token &t = peek();
    if (t.kind == TokenKind::Number) {
        Token n = next();
        auto e = make(Expr::Op::Number, n.line);
        e->number = n.number;
        return e;
    }
    if (t.kind == TokenKind::Ident) {
        Token id = next();
        if (accept_punct("(")) {
            std::vector<ExprPtr> args;
            if (!at_punct(")")) {
                args.push_back(parse_expression());
                while (accept_punct(",")) {
                    args.push_back(parse_expression());
                }
            }
            expect_punct(")");
            auto e = make(Expr::Op::Call, id.line, std::move(args));
            e->name = id.text;
            return e;
        }
        auto e = make(Expr::Op::Var, id.line);
        e->name = id.text;
        return e;
    }
    if (accept_punct("(")) {
        ExprPtr inner = parse_expression();
        expect_punct(")");
        return inner;
    }
    throw SyntaxError(t.line, "expected a number, name or '(' but found '" + t.text + "'");
}

double freqbin::cli::evaluate_text(std::string_view text, const Environment &env) {
    TokenStream ts(tokenize(text));
    ts.skip_newlines();
    ExprPtr e = ts.parse_expression();
    ts.skip_newlines();
    if (!ts.at_end()) {
        throw SyntaxError(ts.peek().line, "trailing input after expression: '" + ts.peek().text + "'");
    }
    return evaluate(*e, env);
}
