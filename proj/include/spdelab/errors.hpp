#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spdelab {

/// Process exit codes used by the command-line driver.
enum class ExitCode : int {
    Ok = 0,
    Config = 2,
    Domain = 3,
    Accuracy = 4,
    BlowUp = 5,
};

/// Base of every library error. Carries the exit code the CLI maps it to.
class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ExitCode code() const noexcept { return code_; }
    virtual const char* kind() const noexcept = 0;

private:
    ExitCode code_;
};

/// Malformed or inconsistent configuration (bad field, bad type, failed invariant).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ExitCode::Config, what) {}
    const char* kind() const noexcept override { return "config"; }
};

/// A mathematically meaningless request: wrong parameter range, unsupported model,
/// failed precondition of a bound.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ExitCode::Domain, what) {}
    const char* kind() const noexcept override { return "domain"; }
};

/// A numerical routine could not reach the requested accuracy.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved_error)
        : Error(ExitCode::Accuracy, what), achieved_error_(achieved_error) {}
    explicit AccuracyError(const std::string& what) : AccuracyError(what, -1.0) {}

    /// Error estimate reached before giving up (negative when not applicable).
    double achieved_error() const noexcept { return achieved_error_; }
    const char* kind() const noexcept override { return "accuracy"; }

private:
    double achieved_error_;
};

/// Discretisation too coarse for the requested evaluation.
class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& what) : Error(ExitCode::Accuracy, what) {}
    const char* kind() const noexcept override { return "resolution"; }
};

/// The simulated field became non-finite.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, std::size_t step)
        : Error(ExitCode::BlowUp, what), step_(step) {}

    std::size_t step() const noexcept { return step_; }
    const char* kind() const noexcept override { return "blow_up"; }

private:
    std::size_t step_;
};

}  // namespace spdelab
