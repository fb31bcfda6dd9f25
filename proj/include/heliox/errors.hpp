#pragma once
// heliox/errors.hpp - exception types
//
// Each category maps onto one CLI exit code (see tools/heliox.cpp):
// usage 2, validation/config/calibration 3, numerical 4.

#include <stdexcept>
#include <string>

namespace heliox {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula (R <= 0, T <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or incomplete configuration document.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Configuration parsed but violates a physical or structural rule.
class ValidationError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Root not bracketed, integrator blow-up, singular evaluation.
class NumericalError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace heliox
