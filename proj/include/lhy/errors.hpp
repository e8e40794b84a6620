#pragma once

#include <stdexcept>
#include <string>

namespace lhy {

// Base for all library failures. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Raised when the quadratic coefficients leave the gapped regime (F_p <= |G_p|).
class ModelRegimeError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace lhy
