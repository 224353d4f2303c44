#pragma once

#include <stdexcept>
#include <string>

namespace kvn {

// Base class for precondition and contract violations raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for malformed or incomplete scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kvn
