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

#ifndef FREQBIN_CLI_CIRCUIT_FILE_HPP
#define FREQBIN_CLI_CIRCUIT_FILE_HPP

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freqbin/circuits.hpp"
#include "freqbin/cli/syntax.hpp"

namespace freqbin::cli {

struct Diagnostic {
    int line = 0;
    std::string context;
    std::string message;

    /// `line 7, element coupler: ...`
    std::string str() const;
};

/// Base for every problem found in a circuit file. All diagnostics from one
/// pass are reported together.
class CircuitFileError : public std::runtime_error {
   public:
    CircuitFileError(const std::string &kind, std::string source, std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic> &diagnostics() const noexcept {
        return diagnostics_;
    }

   private:
    std::vector<Diagnostic> diagnostics_;
};

/// Malformed syntax.
class ParseError : public CircuitFileError {
   public:
    ParseError(std::string source, std::vector<Diagnostic> d)
        : CircuitFileError("parse error", std::move(source), std::move(d)) {
    }
};

/// Well-formed but describes an invalid circuit.
class ValidationError : public CircuitFileError {
   public:
    ValidationError(std::string source, std::vector<Diagnostic> d)
        : CircuitFileError("validation error", std::move(source), std::move(d)) {
    }
};

struct Value;

struct Field {
    std::string key;
    int line = 0;
    std::shared_ptr<const Value> value;
    /// `count @ colour bin` detector constraint; "*" means unconstrained.
    bool has_constraint = false;
    std::string constraint_colour;
    ExprPtr constraint_bin;
};

struct Value {
    enum class Kind { Expr, Pair, Block, String };
    Kind kind = Kind::Expr;
    int line = 0;
    ExprPtr expr;
    ExprPtr re;
    ExprPtr im;
    std::vector<Field> fields;
    std::string text;
};

struct Statement {
    enum class Kind { Assign, Param, Stanza, Element };
    Kind kind = Kind::Assign;
    std::string keyword;
    /// Element type for `element X {…}`, parameter name for `param X = …`.
    std::string subtype;
    int line = 0;
    std::vector<Value> values;
    std::vector<Field> fields;
};

/// A parsed but unresolved circuit description. Parameters stay symbolic
/// until `resolve`, so one document serves every point of a sweep.
class CircuitDocument {
   public:
    static CircuitDocument parse(std::string_view text, std::string source_name = "<input>");
    static CircuitDocument load(const std::string &path);

    /// Declared parameters with defaults, in declaration order.
    ParameterSet parameters(const ParameterSet &overrides = {}) const;

    /// Evaluates every stanza. Overrides must name declared parameters.
    /// Throws ValidationError listing every problem found.
    Circuit resolve(const ParameterSet &overrides = {}) const;

    /// Sweep template. Each row overrides only the `axes` and the `fixed`
    /// names, so parameters defined from others follow the swept values.
    CircuitTemplate as_template(const ParameterSet &fixed = {}, const std::vector<std::string> &axes = {}) const;

    const std::string &source_name() const {
        return source_;
    }
    const std::vector<Statement> &statements() const {
        return statements_;
    }

   private:
    std::string source_;
    std::vector<Statement> statements_;
};

Circuit parse_circuit_text(std::string_view text, const ParameterSet &overrides = {});
Circuit parse_circuit_file(const std::string &path, const ParameterSet &overrides = {});

/// Writes a circuit as a `device = custom` file with every number at full
/// precision. Parsing the output reproduces an identical Circuit.
std::string serialize_circuit(const Circuit &circuit);

}  // namespace freqbin::cli

#endif
