// errors.hpp: Exception types shared by the solvers and the command-line front end

#pragma once

#include <stdexcept>
#include <string>

namespace darkstate {

// Bad user input: unknown names, missing options, conflicting flags.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Closed-form evaluation refused because two poles nearly coincide.
class DegenerateSpectrumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integrator could not make progress.
class IntegratorStallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Volterra step too coarse for the rates in play.
class StepSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace darkstate
