#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mars {

/// A precondition of an operation was violated by the caller.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No admissible technique covers a point where weights were requested.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A sample was evaluated at a point its own technique cannot produce.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem or scene definition fails validation.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or expression.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string &what, std::optional<std::size_t> technique = std::nullopt)
        : std::runtime_error(what), m_technique(technique) {}

    /// Technique whose moment integral failed, when known.
    std::optional<std::size_t> technique() const { return m_technique; }

private:
    std::optional<std::size_t> m_technique;
};

} // namespace mars
