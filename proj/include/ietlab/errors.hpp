#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ietlab {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct MixedFieldError : DomainError {
    using DomainError::DomainError;
};

struct RVUndefined : std::runtime_error {
    std::size_t step;
    RVUndefined(std::size_t s, const std::string& what)
        : std::runtime_error(what), step(s) {}
};

struct BackwardUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSuspension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityTooClose : std::runtime_error {
    long long index;
    SingularityTooClose(long long i, const std::string& what)
        : std::runtime_error(what), index(i) {}
};

struct IndeterminateComparison : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstraintViolation : std::invalid_argument {
    std::string constraint;
    ConstraintViolation(std::string name, const std::string& what)
        : std::invalid_argument(what), constraint(std::move(name)) {}
};

struct PreconditionError : std::runtime_error {
    std::string witness;
    PreconditionError(std::string w, const std::string& what)
        : std::runtime_error(what), witness(std::move(w)) {}
};

}  // namespace ietlab
