#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace spinkin::validation {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double max_defect = 0.0;
    std::string detail;
};

/// Test hooks. mutate_structure_constants edits the copy of f_abc seen by the Jacobi suite.
struct Hooks {
    std::function<void(std::array<double, 512>&)> mutate_structure_constants;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
SuiteResult run_suite(const std::string& name, const Hooks& hooks = {});

/// Every suite when name is empty.
std::vector<SuiteResult> run_suites(const std::string& name = "", const Hooks& hooks = {});

std::string format_report(const std::vector<SuiteResult>& results);

/// Observed convergence orders; used by the convergence suite and the tests.
double stencil_convergence_order();
double poisson_convergence_ratio();
double rk4_convergence_order();

}  // namespace spinkin::validation
