#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlsync {

// Invalid argument combinations (infeasible valencies, bad dimensions, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Random construction exhausted its restart budget.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested allocation exceeds the configured memory cap.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, std::uint64_t required, std::uint64_t cap)
        : std::runtime_error(what), required_bytes(required), cap_bytes(cap) {}
    std::uint64_t required_bytes;
    std::uint64_t cap_bytes;
};

// Input violates a structural contract (e.g. non-symmetric where Hermitian required).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative eigensolver did not converge; carries the worst residual norms.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals_)
        : std::runtime_error(what), residuals(std::move(residuals_)) {}
    std::vector<double> residuals;
};

// Partial spectrum cannot represent the initial state to the requested accuracy.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double weight_)
        : std::runtime_error(what), truncation_weight(weight_) {}
    double truncation_weight;
};

// Direct integration produced non-finite values.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double failing_time_)
        : std::runtime_error(what), failing_time(failing_time_) {}
    double failing_time;
};

// arg(0) requested; reports where.
class UndefinedAngleError : public std::runtime_error {
public:
    UndefinedAngleError(const std::string& what, int index_, double time_)
        : std::runtime_error(what), index(index_), time(time_) {}
    int index;
    double time;
};

// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qlsync
