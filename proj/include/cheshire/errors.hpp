#ifndef CHESHIRE_ERRORS_HPP
#define CHESHIRE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cheshire {

// Violated precondition on inputs or configuration. The CLI maps these to
// exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatchError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class SpaceMismatchError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class DuplicateLabelError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class LabelNotFoundError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NonFiniteValueError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NonHermitianError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Failure conditions that arise while running an otherwise valid
// configuration. The CLI maps these to exit code 1.
class RuntimeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Post-selected state is (numerically) orthogonal to the pre-selected one;
// weak values would diverge.
class OrthogonalPostSelection : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

// Post-selection retained no amplitude, so no pointer statistics exist.
class ZeroPostSelection : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

// Arm-u sum-rule inference was requested without the sigma_z record it
// arithmetically requires.
class MissingSigmaZMeasurement : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

} // namespace cheshire

#endif
