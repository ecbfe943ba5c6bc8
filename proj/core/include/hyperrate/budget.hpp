#pragma once

#include <string>

namespace hyperrate {

// Default cap on the number of elementary evaluations (tuples, selector
// pairs, graphs) a brute-force routine may perform. The environment variable
// HYPERRATE_BUDGET overrides it.
inline constexpr double kDefaultEvaluationBudget = 1e9;

double evaluation_budget();
void set_evaluation_budget(double budget);

// Throws BudgetExceeded when required > budget.
void check_budget(const std::string& what, double required, double budget);

} // namespace hyperrate
