#pragma once

#include <stdexcept>
#include <string>

namespace logcrystal {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (level index out of range, |P| > 1/2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Operation needs the degenerate regime gamma > 1/2.
class RegimeError : public Error {
public:
    using Error::Error;
};

// A construction collapses (zero offset, sigma too wide for the peak separation).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Two operands were built for different model parameters.
class MismatchError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// A brute-force oracle was asked to exceed its configured size bound.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace logcrystal
