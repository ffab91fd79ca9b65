#pragma once

#include <stdexcept>
#include <string>

namespace hml {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument to an exact/combinatorial routine.
class DomainError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    GeometryError(const std::string& what, double offending)
        : Error(what + " (got " + std::to_string(offending) + ")"), value_(offending) {}
    double offending_value() const noexcept { return value_; }

private:
    double value_;
};

class SingularGauge : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double final_residual, int iterations)
        : Error(what), residual_(final_residual), iterations_(iterations) {}
    double final_residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

// A formula evaluated as printed has no value at the given point.
class UndefinedFormula : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hml
