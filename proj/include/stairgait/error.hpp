#pragma once

#include <stdexcept>
#include <string>

namespace stairgait {

/// Failure while building a plan. `phase()` names the planning stage
/// (e.g. "hip", "swing", "ik", "step 2/hip") for CLI diagnostics.
class PlanningError : public std::runtime_error {
public:
    PlanningError(std::string phase, const std::string& what)
        : std::runtime_error(what), phase_(std::move(phase)) {}

    const std::string& phase() const noexcept { return phase_; }

private:
    std::string phase_;
};

/// Rejected or unparsable configuration. `field()` is the dotted path of
/// the first offending field, empty for syntax errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class UnreachableTarget : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace stairgait
