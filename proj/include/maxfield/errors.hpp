#pragma once

#include <stdexcept>
#include <string>

namespace maxfield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration. The message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The normalizing constant c = \int sup_K f dH is infinite, so no normalized
/// representation exists.
class NonFiniteConstant : public Error {
public:
    using Error::Error;
};

/// A shift density vanishes where the sup-shifted shape is positive.
class RegularityViolation : public Error {
public:
    using Error::Error;
};

/// A sampler exceeded its spectral-function cap before the stopping rule held.
class BudgetExhausted : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

} // namespace maxfield
