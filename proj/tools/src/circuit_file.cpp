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

#include "freqbin/cli/circuit_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "freqbin/error.hpp"

using namespace freqbin;
using namespace freqbin::cli;

std::string Diagnostic::str() const {
    std::string out;
    if (line > 0) {
        out += "line " + std::to_string(line);
    }
    if (!context.empty()) {
        out += (out.empty() ? "" : ", ") + context;
    }
    return out + (out.empty() ? "" : ": ") + message;
}

namespace {

std::string join_diagnostics(const std::string &kind, const std::string &source, const std::vector<Diagnostic> &d) {
    std::string out = source + ": " + kind;
    for (const auto &x : d) {
        out += "\n  " + x.str();
    }
    return out;
}

}  // namespace

CircuitFileError::CircuitFileError(const std::string &kind, std::string source, std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(kind, source, diagnostics)), diagnostics_(std::move(diagnostics)) {
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class StatementParser {
   public:
    explicit StatementParser(std::vector<Token> tokens) : ts_(std::move(tokens)) {
    }

    std::vector<Statement> parse_all(std::vector<Diagnostic> &diags) {
        std::vector<Statement> out;
        while (true) {
            skip_separators();
            if (ts_.at_end()) {
                break;
            }
            const std::size_t start = ts_.position();
            try {
                out.push_back(parse_statement());
            } catch (const SyntaxError &e) {
                diags.push_back({e.line(), "", e.what()});
                ts_.seek(start);
                recover();
            }
        }
        return out;
    }

   private:
    void skip_separators() {
        while (ts_.peek().kind == TokenKind::Newline || ts_.at_punct(";")) {
            ts_.next();
        }
    }

    // From the start of a broken statement, skips to the next newline outside
    // any bracket so that one mistake yields one diagnostic.
    void recover() {
        int depth = 0;
        while (!ts_.at_end()) {
            const Token &t = ts_.peek();
            if (t.kind == TokenKind::Punct) {
                if (t.text == "{" || t.text == "[" || t.text == "(") {
                    ++depth;
                } else if (t.text == "}" || t.text == "]" || t.text == ")") {
                    depth = std::max(0, depth - 1);
                }
            } else if (t.kind == TokenKind::Newline && depth == 0) {
                return;
            }
            ts_.next();
        }
    }

    void end_of_statement() {
        const Token &t = ts_.peek();
        if (t.kind == TokenKind::Newline || t.kind == TokenKind::End || ts_.at_punct(";")) {
            return;
        }
        throw SyntaxError(t.line, "unexpected '" + t.text + "' after statement");
    }

    std::string expect_ident(const char *what) {
        const Token &t = ts_.peek();
        if (t.kind != TokenKind::Ident) {
            throw SyntaxError(t.line, std::string("expected ") + what + " but found '" + t.text + "'");
        }
        return ts_.next().text;
    }

    Statement parse_statement() {
        Statement st;
        st.line = ts_.peek().line;
        st.keyword = expect_ident("a statement keyword");
        if (st.keyword == "element") {
            st.kind = Statement::Kind::Element;
            st.subtype = expect_ident("an element type");
            st.fields = parse_block();
        } else if (st.keyword == "param") {
            st.kind = Statement::Kind::Param;
            st.subtype = expect_ident("a parameter name");
            ts_.expect_punct("=");
            st.values.push_back(parse_value());
        } else if (ts_.accept_punct("=")) {
            st.kind = Statement::Kind::Assign;
            st.values.push_back(parse_value());
            while (ts_.accept_punct(",")) {
                st.values.push_back(parse_value());
            }
        } else if (ts_.at_punct("{")) {
            st.kind = Statement::Kind::Stanza;
            st.fields = parse_block();
        } else {
            throw SyntaxError(ts_.peek().line, "expected '=' or '{' after '" + st.keyword + "'");
        }
        end_of_statement();
        return st;
    }

    void skip_block_space() {
        while (ts_.peek().kind == TokenKind::Newline) {
            ts_.next();
        }
    }

    std::vector<Field> parse_block() {
        ts_.expect_punct("{");
        std::vector<Field> fields;
        while (true) {
            skip_block_space();
            if (ts_.accept_punct("}")) {
                break;
            }
            if (ts_.at_end()) {
                throw SyntaxError(ts_.peek().line, "unterminated '{' block");
            }
            fields.push_back(parse_field());
            const Token &t = ts_.peek();
            if (t.kind == TokenKind::Newline || ts_.at_punct("}")) {
                continue;
            }
            if (!ts_.accept_punct(",")) {
                throw SyntaxError(t.line, "expected ',' or '}' but found '" + t.text + "'");
            }
        }
        return fields;
    }

    Field parse_field() {
        Field f;
        const Token &t = ts_.peek();
        f.line = t.line;
        if (t.kind == TokenKind::Ident || t.kind == TokenKind::String || t.kind == TokenKind::Number) {
            f.key = ts_.next().text;
        } else {
            throw SyntaxError(t.line, "expected a field name but found '" + t.text + "'");
        }
        if (!ts_.accept_punct("=") && !ts_.accept_punct(":")) {
            throw SyntaxError(ts_.peek().line, "expected '=' or ':' after field '" + f.key + "'");
        }
        f.value = std::make_shared<Value>(parse_value());
        if (ts_.accept_punct("@")) {
            f.has_constraint = true;
            if (ts_.accept_punct("*")) {
                f.constraint_colour = "*";
            } else {
                f.constraint_colour = expect_ident("a colour (S, I or *)");
            }
            if (ts_.accept_punct("*")) {
                f.constraint_bin = nullptr;
            } else {
                f.constraint_bin = ts_.parse_expression();
            }
        }
        return f;
    }

    Value parse_value() {
        Value v;
        const Token &t = ts_.peek();
        v.line = t.line;
        if (ts_.at_punct("[")) {
            ts_.next();
            skip_block_space();
            v.kind = Value::Kind::Pair;
            v.re = ts_.parse_expression();
            skip_block_space();
            ts_.expect_punct(",");
            skip_block_space();
            v.im = ts_.parse_expression();
            skip_block_space();
            ts_.expect_punct("]");
        } else if (ts_.at_punct("{")) {
            v.kind = Value::Kind::Block;
            v.fields = parse_block();
        } else if (t.kind == TokenKind::String) {
            v.kind = Value::Kind::String;
            v.text = ts_.next().text;
        } else {
            v.kind = Value::Kind::Expr;
            v.expr = ts_.parse_expression();
        }
        return v;
    }

    TokenStream ts_;
};

}  // namespace

CircuitDocument CircuitDocument::parse(std::string_view text, std::string source_name) {
    CircuitDocument doc;
    doc.source_ = std::move(source_name);
    std::vector<Diagnostic> diags;
    std::vector<Token> tokens;
    try {
        tokens = tokenize(text);
    } catch (const SyntaxError &e) {
        throw ParseError(doc.source_, {{e.line(), "", e.what()}});
    }
    StatementParser parser(std::move(tokens));
    doc.statements_ = parser.parse_all(diags);
    if (!diags.empty()) {
        throw ParseError(doc.source_, std::move(diags));
    }
    return doc;
}

CircuitDocument CircuitDocument::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, {{0, "", "cannot open file"}});
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

// Reads the fields of one stanza, recording problems instead of throwing.
class FieldReader {
   public:
    FieldReader(const std::vector<Field> &fields, std::string context, int line, const Environment &env,
                std::vector<Diagnostic> &diags)
        : fields_(fields), context_(std::move(context)), line_(line), env_(env), diags_(diags) {
        std::set<std::string> seen;
        for (const auto &f : fields_) {
            if (!seen.insert(f.key).second) {
                problem(f.line, "duplicate field '" + f.key + "'");
            }
        }
    }

    const Field *find(const std::string &key) {
        for (const auto &f : fields_) {
            if (f.key == key) {
                used_.insert(key);
                return &f;
            }
        }
        return nullptr;
    }

    bool has(const std::string &key) const {
        for (const auto &f : fields_) {
            if (f.key == key) {
                return true;
            }
        }
        return false;
    }

    void problem(int line, const std::string &msg) {
        diags_.push_back({line > 0 ? line : line_, context_, msg});
    }

    std::optional<double> real(const std::string &key, bool required = true) {
        const Field *f = find(key);
        if (!f) {
            if (required) {
                problem(line_, "missing field '" + key + "'");
            }
            return std::nullopt;
        }
        return real_of(*f->value, key);
    }

    std::optional<double> real_of(const Value &v, const std::string &key) {
        if (v.kind != Value::Kind::Expr) {
            problem(v.line, "field '" + key + "' must be a real number");
            return std::nullopt;
        }
        return eval(*v.expr, key);
    }

    std::optional<double> eval(const Expr &e, const std::string &key) {
        try {
            double x = evaluate(e, env_);
            if (!std::isfinite(x)) {
                problem(e.line, "field '" + key + "' evaluates to a non-finite number");
                return std::nullopt;
            }
            return x;
        } catch (const SyntaxError &err) {
            problem(err.line(), "field '" + key + "': " + err.what());
            return std::nullopt;
        }
    }

    std::optional<std::uint32_t> index(const std::string &key, bool required = true) {
        const Field *f = find(key);
        if (!f) {
            if (required) {
                problem(line_, "missing field '" + key + "'");
            }
            return std::nullopt;
        }
        return index_of(*f->value, key);
    }

    std::optional<std::uint32_t> index_of(const Value &v, const std::string &key) {
        auto x = real_of(v, key);
        if (!x) {
            return std::nullopt;
        }
        if (*x < 0 || *x != std::floor(*x) || *x > 1e6) {
            problem(v.line, "field '" + key + "' must be a non-negative integer");
            return std::nullopt;
        }
        return static_cast<std::uint32_t>(*x);
    }

    std::optional<Complex> complex(const std::string &key, bool required = true) {
        const Field *f = find(key);
        if (!f) {
            if (required) {
                problem(line_, "missing field '" + key + "'");
            }
            return std::nullopt;
        }
        return complex_of(*f->value, key);
    }

    std::optional<Complex> complex_of(const Value &v, const std::string &key) {
        switch (v.kind) {
            case Value::Kind::Expr: {
                auto x = eval(*v.expr, key);
                return x ? std::optional<Complex>(Complex{*x, 0.0}) : std::nullopt;
            }
            case Value::Kind::Pair: {
                auto re = eval(*v.re, key);
                auto im = eval(*v.im, key);
                if (!re || !im) {
                    return std::nullopt;
                }
                return Complex{*re, *im};
            }
            case Value::Kind::Block:
                return envelope_beta(v, key);
            case Value::Kind::String:
                problem(v.line, "field '" + key + "' must be a number or [re, im]");
                return std::nullopt;
        }
        return std::nullopt;
    }

    std::optional<std::string> word(const std::string &key, bool required = true) {
        const Field *f = find(key);
        if (!f) {
            if (required) {
                problem(line_, "missing field '" + key + "'");
            }
            return std::nullopt;
        }
        if (f->value->kind == Value::Kind::String) {
            return f->value->text;
        }
        if (f->value->kind == Value::Kind::Expr && !f->value->expr->bare_name().empty()) {
            return f->value->expr->bare_name();
        }
        problem(f->line, "field '" + key + "' must be a name");
        return std::nullopt;
    }

    std::optional<Colour> colour(const std::string &key, bool required = true) {
        auto w = word(key, required);
        if (!w) {
            return std::nullopt;
        }
        return parse_colour(*w, find(key)->line, key);
    }

    std::optional<Colour> parse_colour(const std::string &w, int line, const std::string &key) {
        if (w == "S" || w == "signal") {
            return Colour::Signal;
        }
        if (w == "I" || w == "idler") {
            return Colour::Idler;
        }
        problem(line, "field '" + key + "' must be S or I, not '" + w + "'");
        return std::nullopt;
    }

    std::optional<bool> boolean(const std::string &key) {
        auto w = word(key, false);
        if (!w) {
            return std::nullopt;
        }
        if (*w == "true") {
            return true;
        }
        if (*w == "false") {
            return false;
        }
        problem(find(key)->line, "field '" + key + "' must be true or false");
        return std::nullopt;
    }

    /// Flags fields nobody asked for.
    void finish(const std::set<std::string> &also_known = {}) {
        for (const auto &f : fields_) {
            if (!used_.count(f.key) && !also_known.count(f.key)) {
                problem(f.line, "unknown field '" + f.key + "'");
            }
        }
    }

    const std::vector<Field> &fields() const {
        return fields_;
    }
    void mark_used(const std::string &key) {
        used_.insert(key);
    }
    const std::string &context() const {
        return context_;
    }

   private:
    std::optional<Complex> envelope_beta(const Value &v, const std::string &key) {
        FieldReader env(v.fields, context_ + " " + key + " envelope", v.line, env_, diags_);
        auto gamma = env.complex("gamma");
        auto alpha0 = env.complex("alpha0");
        auto tau = env.real("tau");
        env.finish();
        if (!gamma || !alpha0 || !tau) {
            return std::nullopt;
        }
        try {
            return compute_beta(gaussian_envelope(*alpha0, *tau, *gamma));
        } catch (const SimulationError &e) {
            problem(v.line, e.what());
            return std::nullopt;
        }
    }

    const std::vector<Field> &fields_;
    std::string context_;
    int line_;
    const Environment &env_;
    std::vector<Diagnostic> &diags_;
    std::set<std::string> used_;
};

std::optional<CouplerParams> read_coupler(FieldReader &r, int line) {
    std::optional<CouplerParams> out;
    bool has_theta = r.has("theta");
    bool has_tr = r.has("T") || r.has("R");
    if (has_theta && has_tr) {
        r.problem(line, "give either theta or T/R, not both");
        r.mark_used("theta");
        r.mark_used("T");
        r.mark_used("R");
        return std::nullopt;
    }
    if (has_theta) {
        auto th = r.real("theta");
        if (th) {
            out = CouplerParams::from_theta(*th);
        }
    } else if (has_tr) {
        auto t = r.complex("T");
        auto rr = r.complex("R");
        if (t && rr) {
            out = CouplerParams{*t, *rr};
        }
    } else {
        out = CouplerParams::balanced();
    }
    if (out) {
        try {
            out->validate();
        } catch (const SimulationError &e) {
            r.problem(line, std::string(e.what()) + " (coupler must be unitary)");
            return std::nullopt;
        }
    }
    return out;
}

std::optional<ModePredicate> read_predicate(FieldReader &r) {
    ModePredicate p;
    bool ok = true;
    if (r.has("colour")) {
        auto c = r.colour("colour");
        ok = ok && c.has_value();
        p.colour = c;
    }
    if (r.has("bin")) {
        auto b = r.index("bin");
        ok = ok && b.has_value();
        p.bin = b;
    }
    return ok ? std::optional<ModePredicate>(p) : std::nullopt;
}

std::optional<std::vector<PathIndex>> read_path_list(const Statement &st, const Environment &env,
                                                     std::vector<Diagnostic> &diags) {
    static const std::vector<Field> none;
    FieldReader r(none, st.keyword, st.line, env, diags);
    std::vector<PathIndex> out;
    bool ok = true;
    for (const auto &v : st.values) {
        auto p = r.index_of(v, st.keyword);
        ok = ok && p.has_value();
        if (p) {
            out.push_back(*p);
        }
    }
    return ok ? std::optional(out) : std::nullopt;
}

std::optional<BinRegisterState> read_target(FieldReader &r, int line, std::size_t arity) {
    auto kind = r.word("kind");
    if (!kind) {
        r.finish();
        return std::nullopt;
    }
    std::optional<BinRegisterState> out;
    try {
        if (*kind == "ghz") {
            auto a = r.complex("a");
            auto b = r.complex("b");
            auto n = r.index("arity", false);
            if (a && b) {
                out = ghz_target(*a, *b, n ? *n : arity);
            }
        } else if (*kind == "w") {
            auto a = r.complex("a");
            auto b = r.complex("b");
            auto c = r.complex("c");
            if (a && b && c) {
                out = w_target(*a, *b, *c);
            }
        } else if (*kind == "table") {
            std::map<BinString, Complex> amps;
            std::optional<std::size_t> width;
            bool ok = true;
            for (const auto &f : r.fields()) {
                if (f.key == "kind") {
                    continue;
                }
                r.mark_used(f.key);
                BinString bins;
                for (char ch : f.key) {
                    if (ch < '0' || ch > '9') {
                        r.problem(f.line, "target key '" + f.key + "' must be a string of bin digits");
                        ok = false;
                        break;
                    }
                    bins.push_back(static_cast<BinIndex>(ch - '0'));
                }
                if (width && bins.size() != *width) {
                    r.problem(f.line, "target keys have different lengths");
                    ok = false;
                }
                width = bins.size();
                auto amp = r.complex_of(*f.value, f.key);
                ok = ok && amp.has_value();
                if (amp) {
                    amps[bins] = *amp;
                }
            }
            if (ok && width) {
                std::vector<PathIndex> paths;
                for (std::size_t k = 1; k <= *width; ++k) {
                    paths.push_back(static_cast<PathIndex>(k));
                }
                out = make_register(paths, amps);
            } else if (ok) {
                r.problem(line, "table target lists no amplitudes");
            }
        } else {
            r.problem(line, "target kind must be ghz, w or table, not '" + *kind + "'");
        }
    } catch (const SimulationError &e) {
        r.problem(line, e.what());
        out.reset();
    }
    r.finish();
    return out;
}

}  // namespace

ParameterSet CircuitDocument::parameters(const ParameterSet &overrides) const {
    ParameterSet out;
    Environment env;
    std::vector<Diagnostic> diags;
    static const std::vector<Field> none;
    for (const auto &st : statements_) {
        if (st.kind != Statement::Kind::Param) {
            continue;
        }
        bool overridden = false;
        double value = 0.0;
        for (const auto &[k, v] : overrides) {
            if (k == st.subtype) {
                overridden = true;
                value = v;
            }
        }
        if (!overridden) {
            FieldReader r(none, "param " + st.subtype, st.line, env, diags);
            auto v = r.real_of(st.values.front(), st.subtype);
            value = v.value_or(0.0);
        }
        env[st.subtype] = value;
        out.emplace_back(st.subtype, value);
    }
    if (!diags.empty()) {
        throw ValidationError(source_, diags);
    }
    return out;
}

Circuit CircuitDocument::resolve(const ParameterSet &overrides) const {
    std::vector<Diagnostic> diags;
    Environment env;
    static const std::vector<Field> none;

    // Parameters first, so stanza order does not matter for references.
    std::set<std::string> declared;
    for (const auto &st : statements_) {
        if (st.kind != Statement::Kind::Param) {
            continue;
        }
        if (!declared.insert(st.subtype).second) {
            diags.push_back({st.line, "param " + st.subtype, "parameter declared twice"});
            continue;
        }
        if (st.subtype == "pi") {
            diags.push_back({st.line, "param pi", "'pi' is a reserved constant"});
            continue;
        }
        std::optional<double> value;
        for (const auto &[k, v] : overrides) {
            if (k == st.subtype) {
                value = v;
            }
        }
        if (!value) {
            FieldReader r(none, "param " + st.subtype, st.line, env, diags);
            value = r.real_of(st.values.front(), st.subtype);
        }
        env[st.subtype] = value.value_or(0.0);
    }
    for (const auto &[k, v] : overrides) {
        if (!declared.count(k)) {
            diags.push_back({0, "--set " + k, "no parameter named '" + k + "' is declared"});
        }
    }

    std::string device;
    std::optional<std::string> name;
    std::optional<int> ghz_max_pairs;
    std::optional<RateParams> rates;
    std::optional<BinRegisterState> target;
    const Statement *betas = nullptr;
    const Statement *coupler_stanza[2] = {nullptr, nullptr};
    const Statement *target_stanza = nullptr;
    const Statement *logical_stmt = nullptr;
    const Statement *herald_stmt = nullptr;
    const Statement *detect_stmt = nullptr;
    std::vector<const Statement *> source_stmts;
    std::vector<const Statement *> element_stmts;
    int device_line = 0;

    auto once = [&](const Statement *&slot, const Statement &st) {
        if (slot) {
            diags.push_back({st.line, st.keyword, "'" + st.keyword + "' given twice (first on line " +
                                                      std::to_string(slot->line) + ")"});
        } else {
            slot = &st;
        }
    };

    for (const auto &st : statements_) {
        using K = Statement::Kind;
        if (st.kind == K::Param) {
            continue;
        }
        if (st.kind == K::Element) {
            element_stmts.push_back(&st);
            continue;
        }
        if (st.kind == K::Assign) {
            FieldReader r(none, st.keyword, st.line, env, diags);
            if (st.keyword == "device") {
                const auto &v = st.values.front();
                device_line = st.line;
                device = v.kind == Value::Kind::Expr ? v.expr->bare_name() : "";
                if (st.values.size() != 1 || (device != "ghz" && device != "w" && device != "custom")) {
                    diags.push_back({st.line, "device", "device must be ghz, w or custom"});
                    device = "invalid";
                }
            } else if (st.keyword == "name") {
                if (st.values.front().kind != Value::Kind::String) {
                    diags.push_back({st.line, "name", "name must be a quoted string"});
                } else {
                    name = st.values.front().text;
                }
            } else if (st.keyword == "max_pairs") {
                auto v = r.index_of(st.values.front(), "max_pairs");
                if (v) {
                    ghz_max_pairs = static_cast<int>(*v);
                }
            } else if (st.keyword == "logical") {
                once(logical_stmt, st);
            } else if (st.keyword == "herald") {
                once(herald_stmt, st);
            } else {
                diags.push_back({st.line, st.keyword, "unknown statement '" + st.keyword + "'"});
            }
            continue;
        }
        // Stanzas.
        if (st.keyword == "source") {
            source_stmts.push_back(&st);
        } else if (st.keyword == "detect") {
            once(detect_stmt, st);
        } else if (st.keyword == "betas") {
            once(betas, st);
        } else if (st.keyword == "coupler1") {
            once(coupler_stanza[0], st);
        } else if (st.keyword == "coupler2") {
            once(coupler_stanza[1], st);
        } else if (st.keyword == "target") {
            once(target_stanza, st);
        } else if (st.keyword == "rates") {
            FieldReader r(st.fields, "rates", st.line, env, diags);
            RateParams rp;
            auto pp = r.real("pair_prob", false);
            auto rr = r.real("rep_rate", false);
            if (pp) {
                rp.pair_prob = *pp;
            }
            if (rr) {
                rp.rep_rate = *rr;
            }
            r.finish();
            rates = rp;
        } else {
            diags.push_back({st.line, st.keyword, "unknown stanza '" + st.keyword + "'"});
        }
    }

    if (device.empty()) {
        diags.push_back({0, "device", "missing 'device = ghz | w | custom'"});
        device = "invalid";
    }

    auto forbid = [&](const Statement *st, const char *what) {
        if (st) {
            diags.push_back({st->line, st->keyword, std::string(what) + " is not allowed for device = " + device});
        }
    };

    Circuit circuit;
    bool built = false;

    if (device == "ghz" || device == "w") {
        forbid(detect_stmt, "'detect'");
        forbid(logical_stmt, "'logical'");
        forbid(herald_stmt, "'herald'");
        for (auto *s : source_stmts) {
            forbid(s, "'source'");
        }
        for (auto *s : element_stmts) {
            forbid(s, "'element'");
        }
        if (device == "w") {
            if (ghz_max_pairs) {
                diags.push_back({0, "max_pairs", "max_pairs applies only to device = ghz"});
            }
        } else {
            forbid(coupler_stanza[0], "'coupler1'");
            forbid(coupler_stanza[1], "'coupler2'");
        }
        if (!betas) {
            diags.push_back({device_line, "device " + device, "missing 'betas { … }' stanza"});
        } else {
            FieldReader r(betas->fields, "betas", betas->line, env, diags);
            if (device == "ghz") {
                std::array<std::optional<Complex>, 4> b = {r.complex("beta1"), r.complex("beta2"),
                                                           r.complex("beta3"), r.complex("beta4")};
                r.finish();
                int mp = ghz_max_pairs.value_or(1);
                if (mp < 1 || mp > 2) {
                    diags.push_back({0, "max_pairs", "max_pairs must be 1 or 2"});
                } else if (b[0] && b[1] && b[2] && b[3]) {
                    try {
                        circuit = build_ghz_device({*b[0], *b[1], *b[2], *b[3]}, mp);
                        built = true;
                    } catch (const SimulationError &e) {
                        diags.push_back({betas->line, "betas", e.what()});
                    }
                }
            } else {
                auto b1 = r.complex("beta1");
                auto b2 = r.complex("beta2");
                r.finish();
                std::optional<CouplerParams> cp[2];
                bool couplers_ok = true;
                for (int k = 0; k < 2; ++k) {
                    if (coupler_stanza[k]) {
                        FieldReader cr(coupler_stanza[k]->fields, coupler_stanza[k]->keyword, coupler_stanza[k]->line,
                                       env, diags);
                        cp[k] = read_coupler(cr, coupler_stanza[k]->line);
                        cr.finish();
                        couplers_ok = couplers_ok && cp[k].has_value();
                    } else {
                        cp[k] = CouplerParams::balanced();
                    }
                }
                if (b1 && b2 && couplers_ok) {
                    try {
                        circuit = build_w_device(*b1, *b2, *cp[0], *cp[1]);
                        built = true;
                    } catch (const SimulationError &e) {
                        diags.push_back({betas->line, "betas", e.what()});
                    }
                }
            }
        }
    } else if (device == "custom") {
        forbid(betas, "'betas'");
        forbid(coupler_stanza[0], "'coupler1'");
        forbid(coupler_stanza[1], "'coupler2'");
        if (ghz_max_pairs) {
            diags.push_back({0, "max_pairs", "use max_pairs inside each source stanza for device = custom"});
        }
        bool ok = true;

        DetectionPattern pattern;
        if (!detect_stmt) {
            diags.push_back({device_line, "device custom", "missing 'detect { … }' stanza"});
            ok = false;
        } else {
            FieldReader r(detect_stmt->fields, "detect", detect_stmt->line, env, diags);
            for (const auto &f : detect_stmt->fields) {
                if (f.key == "exclusive") {
                    continue;
                }
                r.mark_used(f.key);
                char *end = nullptr;
                unsigned long path = std::strtoul(f.key.c_str(), &end, 10);
                if (f.key.empty() || *end != '\0') {
                    r.problem(f.line, "detector key '" + f.key + "' must be a path number");
                    ok = false;
                    continue;
                }
                PathRequirement req;
                auto count = r.index_of(*f.value, "path " + f.key);
                if (!count || *count < 1) {
                    if (count) {
                        r.problem(f.line, "path " + f.key + " must require at least one photon");
                    }
                    ok = false;
                    continue;
                }
                req.count = *count;
                if (f.has_constraint) {
                    ModePredicate pred;
                    if (f.constraint_colour != "*") {
                        auto c = r.parse_colour(f.constraint_colour, f.line, "path " + f.key);
                        ok = ok && c.has_value();
                        pred.colour = c;
                    }
                    if (f.constraint_bin) {
                        auto b = r.eval(*f.constraint_bin, "path " + f.key);
                        if (!b || *b < 0 || *b != std::floor(*b)) {
                            r.problem(f.line, "constraint bin on path " + f.key + " must be a non-negative integer");
                            ok = false;
                        } else {
                            pred.bin = static_cast<BinIndex>(*b);
                        }
                    }
                    req.constraint = pred;
                }
                pattern.requirements[static_cast<PathIndex>(path)] = req;
            }
            auto ex = r.boolean("exclusive");
            pattern.exclusive = ex.value_or(true);
            r.finish();
        }
        circuit.pattern = pattern;

        const std::uint32_t n = pattern.total_photons();
        const std::size_t n_sources = std::max<std::size_t>(1, source_stmts.size());
        const int default_max_pairs =
            static_cast<int>(std::min<std::size_t>(2, std::max<std::size_t>(1, (n + 2 * n_sources - 1) / (2 * n_sources))));

        if (source_stmts.empty()) {
            diags.push_back({device_line, "device custom", "no 'source { … }' stanza"});
            ok = false;
        }
        for (const auto *st : source_stmts) {
            FieldReader r(st->fields, "source", st->line, env, diags);
            auto kind = r.word("kind");
            auto path = r.index("path");
            auto mp = r.index("max_pairs", false);
            auto b1 = r.complex("beta1");
            auto b2 = r.complex("beta2");
            std::optional<std::string> label;
            if (const Field *f = r.find("label")) {
                if (f->value->kind == Value::Kind::String) {
                    label = f->value->text;
                } else {
                    r.problem(f->line, "label must be a quoted string");
                }
            }
            r.finish();
            if (!kind || !path || !b1 || !b2) {
                ok = false;
                continue;
            }
            if (*kind != "single_pump" && *kind != "dual_pump") {
                r.problem(st->line, "kind must be single_pump or dual_pump, not '" + *kind + "'");
                ok = false;
                continue;
            }
            try {
                SourceSpec spec = *kind == "single_pump" ? single_pump_source(*b1, *b2) : dual_pump_source(*b1, *b2);
                if (label) {
                    spec.label = *label;
                }
                circuit.sources.push_back({spec.placed_on(*path), *path, mp ? static_cast<int>(*mp) : default_max_pairs});
            } catch (const SimulationError &e) {
                r.problem(st->line, e.what());
                ok = false;
            }
        }

        for (const auto *st : element_stmts) {
            FieldReader r(st->fields, "element " + st->subtype, st->line, env, diags);
            if (st->subtype == "demux") {
                auto in = r.index("in");
                auto s = r.index("signal_out");
                auto i = r.index("idler_out");
                if (in && s && i) {
                    circuit.elements.push_back(Demux{*in, *s, *i});
                } else {
                    ok = false;
                }
            } else if (st->subtype == "adddrop") {
                auto a = r.index("path_a");
                auto b = r.index("path_b");
                auto pred = read_predicate(r);
                if (a && b && pred) {
                    circuit.elements.push_back(AddDrop{*a, *b, *pred});
                } else {
                    ok = false;
                }
            } else if (st->subtype == "coupler") {
                auto a = r.index("path_a");
                auto b = r.index("path_b");
                auto params = read_coupler(r, st->line);
                if (a && b && params) {
                    circuit.elements.push_back(Coupler{*a, *b, *params});
                } else {
                    ok = false;
                }
            } else if (st->subtype == "filter") {
                auto p = r.index("path");
                auto pred = read_predicate(r);
                if (p && pred) {
                    circuit.elements.push_back(Filter{*p, *pred});
                } else {
                    ok = false;
                }
            } else {
                r.problem(st->line, "unknown element type '" + st->subtype + "'");
                ok = false;
                for (const auto &f : st->fields) {
                    r.mark_used(f.key);
                }
            }
            r.finish();
        }

        if (!logical_stmt) {
            diags.push_back({device_line, "device custom", "missing 'logical = …' path list"});
            ok = false;
        } else if (auto l = read_path_list(*logical_stmt, env, diags)) {
            circuit.logical_paths = *l;
        } else {
            ok = false;
        }
        if (herald_stmt) {
            if (auto h = read_path_list(*herald_stmt, env, diags)) {
                circuit.herald_paths = *h;
            } else {
                ok = false;
            }
        }
        circuit.name = "custom";
        built = ok;
    }

    if (target_stanza) {
        FieldReader r(target_stanza->fields, "target", target_stanza->line, env, diags);
        std::size_t arity = built ? circuit.logical_paths.size() : 4;
        target = read_target(r, target_stanza->line, arity);
    }

    if (built) {
        if (name) {
            circuit.name = *name;
        }
        if (rates) {
            circuit.rates = *rates;
        }
        if (target) {
            circuit.target = target;
        }
        for (const auto &p : circuit.problems()) {
            diags.push_back({0, "circuit", p});
        }
    }
    if (!diags.empty()) {
        throw ValidationError(source_, std::move(diags));
    }
    return circuit;
}

CircuitTemplate CircuitDocument::as_template(const ParameterSet &fixed, const std::vector<std::string> &axes) const {
    CircuitTemplate t;
    t.defaults = parameters(fixed);
    std::set<std::string> free(axes.begin(), axes.end());
    for (const auto &kv : fixed) {
        free.insert(kv.first);
    }
    t.build = [doc = *this, free](const ParameterSet &assignment) {
        ParameterSet overrides;
        for (const auto &kv : assignment) {
            if (free.count(kv.first)) {
                overrides.push_back(kv);
            }
        }
        return doc.resolve(overrides);
    };
    return t;
}

Circuit freqbin::cli::parse_circuit_text(std::string_view text, const ParameterSet &overrides) {
    return CircuitDocument::parse(text).resolve(overrides);
}

Circuit freqbin::cli::parse_circuit_file(const std::string &path, const ParameterSet &overrides) {
    return CircuitDocument::load(path).resolve(overrides);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    std::string s = buf;
    if (s == "inf" || s == "-inf" || s == "nan" || s == "-nan") {
        throw SimulationError(ErrorCode::InvalidArgument, "cannot serialize non-finite number");
    }
    return s;
}

std::string cnum(Complex z) {
    return "[" + num(z.real()) + ", " + num(z.imag()) + "]";
}

std::string pred_fields(const ModePredicate &p) {
    std::string out;
    if (p.colour) {
        out += std::string(", colour = ") + colour_char(*p.colour);
    }
    if (p.bin) {
        out += ", bin = " + std::to_string(*p.bin);
    }
    return out;
}

std::string quoted(const std::string &s) {
    for (char c : s) {
        if (c == '"' || c == '\n') {
            throw SimulationError(ErrorCode::InvalidArgument, "label contains a quote or newline");
        }
    }
    return "\"" + s + "\"";
}

std::string path_list(const std::vector<PathIndex> &paths) {
    std::string out;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        out += (k ? ", " : "") + std::to_string(paths[k]);
    }
    return out;
}

}  // namespace

std::string freqbin::cli::serialize_circuit(const Circuit &c) {
    std::string out = "# freqbin circuit\ndevice = custom\n";
    out += "name = " + quoted(c.name) + "\n";
    out += "rates { pair_prob = " + num(c.rates.pair_prob) + ", rep_rate = " + num(c.rates.rep_rate) + " }\n";
    for (const auto &s : c.sources) {
        const auto &t = s.source.terms;
        std::string kind;
        auto at = [&](std::size_t k, Colour c1, BinIndex b1, Colour c2, BinIndex b2) {
            return t[k].first == ModeLabel{s.path, c1, b1} && t[k].second == ModeLabel{s.path, c2, b2};
        };
        if (t.size() == 2 && at(0, Colour::Signal, 0, Colour::Idler, 0) && at(1, Colour::Signal, 1, Colour::Idler, 1)) {
            kind = "single_pump";
        } else if (t.size() == 2 && at(0, Colour::Signal, 0, Colour::Idler, 1) &&
                   at(1, Colour::Signal, 1, Colour::Idler, 0)) {
            kind = "dual_pump";
        } else {
            throw SimulationError(ErrorCode::InvalidArgument,
                                  "source '" + s.source.label + "' is neither a single- nor a dual-pump source");
        }
        out += "source { kind = " + kind + ", path = " + std::to_string(s.path) +
               ", max_pairs = " + std::to_string(s.max_pairs) + ", label = " + quoted(s.source.label) +
               ", beta1 = " + cnum(t[0].beta) + ", beta2 = " + cnum(t[1].beta) + " }\n";
    }
    for (const auto &e : c.elements) {
        std::visit(
            [&](const auto &x) {
                using E = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<E, Demux>) {
                    out += "element demux { in = " + std::to_string(x.in) + ", signal_out = " +
                           std::to_string(x.signal_out) + ", idler_out = " + std::to_string(x.idler_out) + " }\n";
                } else if constexpr (std::is_same_v<E, AddDrop>) {
                    out += "element adddrop { path_a = " + std::to_string(x.path_a) + ", path_b = " +
                           std::to_string(x.path_b) + pred_fields(x.pred) + " }\n";
                } else if constexpr (std::is_same_v<E, Coupler>) {
                    out += "element coupler { path_a = " + std::to_string(x.path_a) + ", path_b = " +
                           std::to_string(x.path_b) + ", T = " + cnum(x.params.transmission) +
                           ", R = " + cnum(x.params.reflection) + " }\n";
                } else {
                    out += "element filter { path = " + std::to_string(x.path) + pred_fields(x.pred) + " }\n";
                }
            },
            e);
    }
    out += "detect { ";
    for (const auto &[path, req] : c.pattern.requirements) {
        out += std::to_string(path) + ": " + std::to_string(req.count);
        if (req.constraint) {
            out += " @ ";
            out += req.constraint->colour ? std::string(1, colour_char(*req.constraint->colour)) : "*";
            out += " ";
            out += req.constraint->bin ? std::to_string(*req.constraint->bin) : "*";
        }
        out += ", ";
    }
    out += std::string("exclusive = ") + (c.pattern.exclusive ? "true" : "false") + " }\n";
    out += "logical = " + path_list(c.logical_paths) + "\n";
    if (!c.herald_paths.empty()) {
        out += "herald = " + path_list(c.herald_paths) + "\n";
    }
    if (c.target) {
        out += "target { kind = table";
        for (const auto &[bins, amp] : c.target->amplitudes) {
            for (auto b : bins) {
                if (b > 9) {
                    throw SimulationError(ErrorCode::InvalidArgument, "cannot serialize target bins above 9");
                }
            }
            out += ", \"" + bin_string_str(bins) + "\" = " + cnum(amp);
        }
        out += " }\n";
    }
    return out;
}
