#pragma once

#include <stdexcept>
#include <string>

namespace fittedrk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (empty interval, bad step count, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The fitting parameter sits inside the guard band of a pole of the
/// closed-form coefficients.
class SingularParameter : public Error {
public:
    SingularParameter(const std::string& what, double v) : Error(what), v_(v) {}
    double v() const noexcept { return v_; }

private:
    double v_;
};

/// No root of the fitting conditions continues the classical Gauss limit.
class BranchFailure : public Error {
public:
    using Error::Error;
};

/// det(I - zA) vanished while evaluating a rational stability function.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

/// Simplified Newton failed to reduce the stage residual below tolerance.
class NewtonDivergence : public Error {
public:
    NewtonDivergence(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Both numerator and denominator of the phase-shift matching formula vanished.
class DegenerateMatching : public Error {
public:
    using Error::Error;
};

/// Unknown method/problem names and similar command-line mistakes.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace fittedrk
