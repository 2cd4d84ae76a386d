#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cli/scenario.hpp"

namespace qframe::cli {

class PointContext;

// A residual passes when it is <= tolerance (kAtMost) or >= tolerance
// (kAtLeast, used for checks asserting something is present).
enum class Bound { kAtMost, kAtLeast };

struct CheckSpec {
  std::string name;
  std::string description;
  double tolerance;
  Bound bound = Bound::kAtMost;
  // Excluded from "all"; runs only when named.
  bool opt_in = false;
  std::function<bool(const Scenario&)> applicable;
  std::function<double(PointContext&)> evaluate;
};

const std::vector<CheckSpec>& check_registry();
const CheckSpec* find_check(std::string_view name);

// The checks a run will execute, in registry order for "all" and in the
// given order otherwise. Throws ScenarioError for unknown or inapplicable
// names.
std::vector<const CheckSpec*> resolve_checks(const Scenario& s);

double effective_tolerance(const Scenario& s, const CheckSpec& c);

struct CheckRecord {
  std::string check;
  std::size_t point_index = 0;
  Point point{};
  std::optional<double> residual;
  double tolerance = 0.0;
  Bound bound = Bound::kAtMost;
  bool pass = false;
  std::string diagnostic;
};

struct Report {
  nlohmann::json scenario;
  std::vector<std::string> checks;
  std::vector<CheckRecord> records;
  std::size_t passed = 0;
  std::size_t failed = 0;

  std::size_t total() const { return records.size(); }
};

Report run_checks(const Scenario& s);

}  // namespace qframe::cli
