#pragma once

#include <stdexcept>
#include <string>

namespace bo {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg, std::string field = {})
        : Error(msg), field(std::move(field)) {}
    std::string field;
};

struct NearEigenvalueError : Error {
    NearEigenvalueError(const std::string& msg, double k, double lambda_j)
        : Error(msg), k(k), lambda_j(lambda_j) {}
    double k, lambda_j;
};

struct IllConditionedError : Error {
    IllConditionedError(const std::string& msg, double cond) : Error(msg), cond(cond) {}
    double cond;
};

struct NoConvergenceError : Error {
    using Error::Error;
};

struct NotInRegimeError : Error {
    using Error::Error;
};

struct DegenerateDenominatorError : Error {
    using Error::Error;
};

struct DegenerateEigenvalueError : Error {
    using Error::Error;
};

struct ChiViolationError : Error {
    using Error::Error;
};

struct PoorFitError : Error {
    PoorFitError(const std::string& msg, double misfit) : Error(msg), misfit(misfit) {}
    double misfit;
};

struct BlowupError : Error {
    using Error::Error;
};

} // namespace bo
