#pragma once

#include <stdexcept>
#include <string>

namespace hyperrate {

// Raised when an enumeration would exceed the configured evaluation budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required, double budget);

    double required() const noexcept { return required_; }
    double budget() const noexcept { return budget_; }

private:
    double required_;
    double budget_;
};

// Hard structural limits (brute-force automorphisms, backtracking counts).
class SizeLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoFeasiblePoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A planted prefix rounds to zero vertices or exceeds n.
class DegenerateWidth : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hyperrate
