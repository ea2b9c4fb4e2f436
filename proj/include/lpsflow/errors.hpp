#pragma once

#include <stdexcept>
#include <string>

namespace lpsflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad mesh parameters, inconsistent tags, unknown enum values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Field lengths that do not match the mesh they are combined with.
class MeshMismatch : public Error {
public:
    using Error::Error;
};

/// An iterative procedure (Newton root finding, CG) ran out of iterations.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : Error(what + " (iterations=" + std::to_string(iterations) +
                ", residual=" + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

/// The time integration produced non-finite values or violated a run guard.
class SolverAbort : public Error {
public:
    SolverAbort(const std::string& what, double last_good_time)
        : Error(what + " (last good t=" + std::to_string(last_good_time) + ")"),
          last_good_time_(last_good_time) {}

    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

#define LPSFLOW_REQUIRE(cond, ExceptionType, msg) \
    do {                                          \
        if (!(cond)) throw ExceptionType(msg);    \
    } while (0)

} // namespace lpsflow
