#pragma once

#include <stdexcept>
#include <string>

namespace survfilter {

// Thrown when validated numeric inputs are out of range (var <= 0, U outside (0,1), ...).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A simulated path produced a non-finite value; carries the offending step.
class SimulationDiverged : public std::runtime_error {
public:
    SimulationDiverged(const std::string& where, std::size_t step)
        : std::runtime_error(where + ": simulation diverged at step " + std::to_string(step)),
          step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

// Iterative solver did not reach tolerance; carries the final residual.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// All likelihood mass underflowed to zero during the forward recursion.
class FilterDegenerate : public std::runtime_error {
public:
    explicit FilterDegenerate(std::size_t step)
        : std::runtime_error("filter weights vanished at observation step " + std::to_string(step)),
          step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

// Mismatched vector lengths between coupled inputs.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Marginal grid still contains duplicate nodes after tie-breaking.
class DegenerateGrid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent run configuration; carries the offending field name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error("config field '" + field + "': " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace survfilter
