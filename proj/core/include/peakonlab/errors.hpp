#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace peakonlab {

// Base of every error raised by the library. Carries the simulation time at
// which the failure was observed when one is meaningful.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, std::optional<double> time = std::nullopt)
        : std::runtime_error(what), time_(time) {}

    std::optional<double> time() const noexcept { return time_; }

private:
    std::optional<double> time_;
};

// Malformed input: bad train, bad grid, bad scenario or config value.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class InvalidTrain : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class InvalidScenario : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class SignOrderViolation : public InvalidScenario {
public:
    using InvalidScenario::InvalidScenario;
};

class BadScale : public InvalidScenario {
public:
    using InvalidScenario::InvalidScenario;
};

// Failures that happen while the computation runs.
class RuntimeFailure : public Error {
public:
    using Error::Error;
};

class CollisionDetected : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class StepSizeUnderflow : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class NotPositiveDefinite : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class NoConvergence : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class OrderingLost : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class EmptyWindow : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class NotSettled : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

}  // namespace peakonlab
