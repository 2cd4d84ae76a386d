#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qframe/transform.hpp"

namespace qframe::cli {

// Load-time failure, already prefixed with "file:line:col: " when a
// location is known.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

struct Sampling {
  std::uint64_t seed = 0;
  int random = 25;
  Point box_min{-0.5, -0.5, -0.5, -0.5};
  Point box_max{0.5, 0.5, 0.5, 0.5};
  std::vector<Point> explicit_points;
};

// Command-line overrides, applied on top of the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> fd_step;
  std::optional<int> fd_order;
  std::optional<double> tolerance;  // replaces every check tolerance
  std::optional<std::vector<std::string>> checks;
};

struct Scenario {
  std::string name;
  std::filesystem::path source;
  Chart chart;
  double coupling = 1.0;
  BasisField basis;
  GaugeConnection omega;

  FieldFn psi_l;
  FieldFn psi_r;
  FieldFn vector;
  std::optional<std::array<ScalarFn, 4>> vector_components;
  std::optional<LorentzField> lorentz;
  std::optional<U1Field> phase;
  std::optional<CoordinateMap> coordinate_map;

  Sampling sampling;
  FDConfig fd;
  Tolerance tol;
  std::vector<std::string> checks;  // empty: every applicable check
  std::map<std::string, double> tolerances;
  std::optional<double> global_tolerance;

  // Resolved sample points: explicit ones first, then the random draw.
  std::vector<Point> points;
  // Stable description of the inputs, echoed into reports.
  nlohmann::json echo;
};

// Parses, applies overrides, draws sample points and runs every load-time
// invariant check. Throws ScenarioError.
Scenario load_scenario(const std::filesystem::path& path,
                       const Overrides& overrides = {});

}  // namespace qframe::cli
