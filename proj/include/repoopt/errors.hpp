#pragma once

#include <stdexcept>
#include <string>

namespace repoopt {

/// Malformed scenario input: bad JSON syntax, unknown or missing fields, wrong types.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (bad market parameters, inconsistent relations).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inputs are individually valid but the pricing model has no meaningful answer
/// (e.g. a non-positive implicit haircut).
class PricingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dealer-ledger step would need financing from outside the scenario.
class LiquidityError : public std::runtime_error {
public:
    LiquidityError(int step, const std::string& condition, double slack);

    int step() const noexcept { return step_; }
    const std::string& condition() const noexcept { return condition_; }
    double slack() const noexcept { return slack_; }

private:
    int step_;
    std::string condition_;
    double slack_;
};

} // namespace repoopt
