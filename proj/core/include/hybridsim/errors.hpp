#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hybridsim {

/// Root of every exception thrown by this library.  Callers that only want
/// a coarse success/failure split can catch this one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ============================================================================
// Model construction and validation
// ============================================================================

/// What went wrong while validating a component definition or a system
/// assembly.  Kept as an enum so tests can assert the exact failure class
/// instead of string-matching messages.
enum class ValidationKind {
    DuplicateName,
    UnresolvedIdentifier,
    UnresolvedState,
    NonBooleanCondition,
    TypeMismatch,
    BadLaw,
    DanglingConnection,
    LabelMismatch,
    CyclicBackupChain,
    ArityMismatch,
    UnknownComponentType,
    BadOdeBinding,
    BadMediatorGroup,
    BadChain,
    BadHook,
    BadAggregate,
};

const char* to_string(ValidationKind kind);

/// A definition or an assembly violates a structural rule (duplicate names,
/// dangling endpoints, unresolved identifiers, ...).
class ValidationError : public Error {
public:
    ValidationError(ValidationKind kind, const std::string& what)
        : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ValidationKind kind() const noexcept { return kind_; }

private:
    ValidationKind kind_;
};

/// Runtime model inconsistency discovered while executing hooks or firing
/// transitions (e.g. a chain hook fired by an instance that belongs to no
/// chain-compatible target).
class ModelError : public Error {
public:
    using Error::Error;
};

// ============================================================================
// Expression evaluation and stochastic laws
// ============================================================================

/// Expression evaluation failed: division by zero, out-of-range connection
/// index, unconnected bare reference, type coercion failure, or a reference
/// cycle deeper than the evaluation depth limit.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A stochastic law was given an unusable parameter (e.g. a non-positive
/// exponential rate at sampling time).
class LawError : public Error {
public:
    using Error::Error;
};

// ============================================================================
// Simulation engine
// ============================================================================

/// Non-finite derivative or state during numeric integration.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A cascade of instantaneous transitions exceeded the configured iteration
/// budget at a single time instant.
class LivelockError : public Error {
public:
    using Error::Error;
};

/// A replication produced more discrete events than the configured limit,
/// which we treat as Zeno behaviour.
class ZenoError : public Error {
public:
    using Error::Error;
};

/// A replication failed inside a multi-run experiment.  Wraps the underlying
/// failure message and remembers which replication caused it.
class ExperimentError : public Error {
public:
    ExperimentError(std::uint64_t replication, const std::string& what)
        : Error("replication " + std::to_string(replication) + ": " + what),
          replication_(replication) {}

    [[nodiscard]] std::uint64_t replication() const noexcept { return replication_; }

private:
    std::uint64_t replication_ = 0;
};

// ============================================================================
// Model text (DSL)
// ============================================================================

/// Syntax error with a source position.  line/column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column,
               const std::string& what)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column)
                + ": " + what),
          file_(std::move(file)), line_(line), column_(column) {}

    [[nodiscard]] const std::string& file() const noexcept { return file_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

/// The parsed text is well-formed but cannot be turned into a system model
/// (unknown component type, bad argument list, broken role contract, ...).
class ElaborationError : public Error {
public:
    explicit ElaborationError(const std::string& what) : Error(what) {}
    ElaborationError(ValidationKind kind, const std::string& what)
        : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ValidationKind kind() const noexcept { return kind_; }

private:
    ValidationKind kind_ = ValidationKind::UnknownComponentType;
};

// ============================================================================
// Metrics
// ============================================================================

/// The metrics tokenizer hit a character no rule accepts.
class TokenError : public Error {
public:
    TokenError(std::size_t line, std::size_t column, const std::string& what)
        : Error("token error at " + std::to_string(line) + ":"
                + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

/// A relative measure is undefined because its denominator is zero
/// (e.g. change ratio against an empty target).
class UndefinedRatio : public Error {
public:
    using Error::Error;
};

/// The comparison report cannot be assembled (missing input files, broken
/// profile, ...).
class ReportError : public Error {
public:
    using Error::Error;
};

}  // namespace hybridsim
