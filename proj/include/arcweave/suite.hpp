#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arcweave/engine.hpp"

namespace arcweave {

/// Expected limit set of one side. Point and circle parameters are compared
/// within `tol`.
struct LimitExpectation {
    LimitKind kind = LimitKind::Unknown;
    Complex point{};
    Complex center{};
    double radius = 0.0;
    double tol = 1e-3;
};

struct ExampleCase {
    std::string id;
    std::string builtin;
    std::optional<double> tau;
    double t0 = 0.0;
    StepControls controls;
    Classification expect_a = Classification::Infinite;
    Classification expect_b = Classification::Infinite;
    /// Unchecked when empty.
    std::optional<LimitExpectation> limit_a;
    std::optional<LimitExpectation> limit_b;
    /// When set, a PERIODIC side must report the arc length of the curve
    /// over this parameter window, within period_tol.
    std::optional<Interval> period_window;
    double period_tol = 1e-6;
};

/// The seven worked examples with their expected verdicts.
std::vector<ExampleCase> example_table();

/// The expectation table as JSON, for auditing.
std::string example_table_json(const std::vector<ExampleCase>& table);
/// Inverse of example_table_json for one row; throws InvalidArgument on schema errors.
ExampleCase example_case_from_json(std::string_view row);

struct ExampleResult {
    ExampleCase example;
    EndpointReport side_a;
    EndpointReport side_b;
    std::optional<double> expected_period;
    std::vector<std::string> mismatches;
    double wall_ms = 0.0;

    bool matched() const noexcept { return mismatches.empty(); }
};

ExampleResult run_example(const ExampleCase& example);

}  // namespace arcweave
