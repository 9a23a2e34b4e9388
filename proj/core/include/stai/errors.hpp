#ifndef STAI_ERRORS_HPP
#define STAI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stai {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent user input (config files, unit strings, parameter
/// ranges). Maps to process exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to meet its contract: the dt-convergence
/// gate, eigensolver convergence, grid containment, shift aliasing.
/// Maps to process exit code 3.
class NumericsError : public Error {
public:
    using Error::Error;
};

class UnitError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class GateError : public NumericsError {
public:
    GateError(const std::string& msg, double phase_coarse, double phase_fine)
        : NumericsError(msg), phase_coarse(phase_coarse), phase_fine(phase_fine) {}
    double phase_coarse;
    double phase_fine;
};

class ContainmentError : public NumericsError {
public:
    using NumericsError::NumericsError;
};

class ConvergenceError : public NumericsError {
public:
    using NumericsError::NumericsError;
};

} // namespace stai

#endif
