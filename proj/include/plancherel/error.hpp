#pragma once

#include <stdexcept>
#include <string>

namespace plancherel {

/// A rational function or local factor was evaluated at one of its poles.
class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A restriction to a linear subspace hit an identically vanishing denominator.
class restriction_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A configured size or dimension cap was exceeded.
class cap_error : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Numerical quadrature did not reach the requested tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace plancherel
