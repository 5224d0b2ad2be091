#pragma once

#include <stdexcept>
#include <string>

namespace driftwatch {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data (malformed files, contract violations).
// The CLI maps these to exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

class InsufficientSample : public DataError {
public:
    using DataError::DataError;
};

class EmptyBatch : public DataError {
public:
    using DataError::DataError;
};

class DimensionMismatch : public DataError {
public:
    using DataError::DataError;
};

class ZeroVector : public DataError {
public:
    using DataError::DataError;
};

class NonNormalizable : public DataError {
public:
    using DataError::DataError;
};

class SeriesTooShort : public DataError {
public:
    using DataError::DataError;
};

class ThresholdMissing : public DataError {
public:
    using DataError::DataError;
};

class ScheduleTooShort : public DataError {
public:
    using DataError::DataError;
};

// Too few surviving null streams to estimate a conditional quantile.
// The CLI maps this to exit code 4; raise the replication count to fix.
class Starvation : public Error {
public:
    using Error::Error;
};

} // namespace driftwatch
