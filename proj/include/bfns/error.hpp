#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace bfns {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument values or mismatched shapes.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A field violates mean-free, reality, solenoidal or finiteness invariants.
class InvalidFieldError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public IoError {
public:
    using IoError::IoError;
};

class VersionError : public IoError {
public:
    using IoError::IoError;
};

class CorruptionError : public IoError {
public:
    using IoError::IoError;
};

class IntegrityError : public IoError {
public:
    using IoError::IoError;
};

struct Trajectory;

// Raised when a state becomes non-finite or exceeds the magnitude limit.
// Carries the trajectory integrated up to the last good step.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, double time, std::shared_ptr<const Trajectory> partial)
        : Error(what), time_(time), partial_(std::move(partial)) {}

    double time() const noexcept { return time_; }
    const std::shared_ptr<const Trajectory>& partial() const noexcept { return partial_; }

private:
    double time_;
    std::shared_ptr<const Trajectory> partial_;
};

}  // namespace bfns
