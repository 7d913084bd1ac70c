#pragma once

#include <stdexcept>
#include <string>

namespace fica {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoInverse : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

// q^d table (or an enumeration) does not fit the configured budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class TruncationError : public FormatError {
public:
    using FormatError::FormatError;
};

}  // namespace fica
