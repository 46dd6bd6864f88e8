#pragma once

#include <stdexcept>
#include <string>

namespace shafer {

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid verifier or optimizer configuration, or a malformed claim.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tangency conditions imposed anywhere other than x = 0.
class UnsupportedAnchor : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The verifier could not decide a claim needed by a parameter search.
class UndecidedError : public std::runtime_error {
public:
    UndecidedError(const std::string &what, double b) : std::runtime_error(what), b_(b) {}
    [[nodiscard]] double b() const { return b_; }

private:
    double b_;
};

} // namespace shafer
