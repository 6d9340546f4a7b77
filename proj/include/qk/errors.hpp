#pragma once

#include <stdexcept>
#include <string>

namespace qk {

/// Mathematical precondition violation (zero inverse, coincident points, kernel hit).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A structured element spec violates its subclass constraints.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input file does not match the expected schema. Carries the offending field path.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
    std::string field;
};

/// Internal consistency check failed (conjugate pairing, determinant residue, ...).
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure could not reach a decision (ambiguous rank, search cap).
/// `achieved` reports the best value reached before giving up.
class DiagnosticError : public std::runtime_error {
public:
    DiagnosticError(const std::string& what, double achieved_value = 0.0)
        : std::runtime_error(what), achieved(achieved_value) {}
    double achieved;
};

} // namespace qk
