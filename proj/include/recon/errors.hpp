#pragma once

#include <stdexcept>
#include <string>

namespace recon {

// Base for every condition the engine raises deliberately.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text. `line` is 1-based; 0 means "not tied to a line".
struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& msg, int line_no = 0)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

// Same predicate used with two different arities.
struct ArityConflict : ParseError {
    using ParseError::ParseError;
};

// A fact file mentioned a variable; facts must be ground.
struct NonGroundFact : ParseError {
    using ParseError::ParseError;
};

// A sentence or definition mentions predicates the knowledge base lacks
// (or redefines ones it already has, where that is forbidden).
struct VocabularyMismatch : Error {
    using Error::Error;
};

// A decode/unfold step hit a hidden predicate with no definition.
struct UnknownHiddenPredicate : Error {
    using Error::Error;
};

// Enumeration grew past the configured ceiling.
struct WorkLimitExceeded : Error {
    using Error::Error;
};

// Bad quality-measure name.
struct UnknownMeasure : Error {
    using Error::Error;
};

// A sentence violates the declared language bias where conformance is required.
struct BiasError : Error {
    using Error::Error;
};

// Bad configuration value (bias file syntax, flag combinations, budgets).
struct ConfigError : Error {
    using Error::Error;
};

// An internal invariant failed; always a bug, never a user error.
struct InternalError : Error {
    using Error::Error;
};

} // namespace recon
