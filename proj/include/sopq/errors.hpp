#pragma once

#include <stdexcept>
#include <string>

namespace sopq {

// Two families: invalid input (domain/validation) and numerical failure.
// The CLI maps the first to exit code 2 and the second to exit code 3.

class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class ParityError : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularMatrixError : public DomainError {
public:
    using DomainError::DomainError;
};

class InconsistentInverseError : public DomainError {
public:
    using DomainError::DomainError;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AccuracyNotReachedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BudgetExceededError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace sopq
