#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curveq/curve.hpp"
#include "curveq/errors.hpp"
#include "curveq/helix.hpp"
#include "curveq/operators.hpp"

namespace curveq::app {

/// Invalid or incomplete run configuration. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Task { geometry, spectrum, verify, helix_check };
enum class OutputFormat { json, csv };

Task parse_task(std::string_view name);
const char* to_string(Task task);
OutputFormat parse_format(std::string_view name);

struct CurveSpec {
  enum class Kind { expressions, helix, circle, line };
  Kind kind = Kind::expressions;
  // expressions
  std::string ax, ay, az;
  std::string parameter = "t";
  double t_min = 0.0;
  double t_max = 1.0;
  bool closed = false;
  // builtins
  HelixParams helix;
  double turns = 1.0;
  double size = 1.0;  ///< circle radius or line length
};

struct GridSpec {
  int n = 512;
  std::optional<BoundaryCondition> bc;
  std::vector<int> refinements{256, 512, 1024};
};

struct RunConfig {
  Task task = Task::geometry;
  CurveSpec curve;
  PhysicalConstants constants;
  GridSpec grid;
  int k = 5;
  int tube_points = 100;
  std::uint64_t seed = 1;
  std::optional<std::string> output_path;
  std::optional<OutputFormat> format;
  /// Test hook: scales every curvature factor of the force build.
  double corrupt_kappa = 1.0;
  /// sha256 of the canonical (key-sorted, compact) config document.
  std::string digest;
};

/// Parses a JSON config document for `task`. Unknown keys, type mismatches
/// and task-specific omissions throw ConfigError before any computation.
RunConfig parse_config(std::string_view text, Task task);

/// Curve definition for the configured curve. Expression syntax errors are
/// rethrown as ConfigError naming the field, keeping the offset.
CurveDefinition make_curve(const CurveSpec& spec);

/// Default boundary condition: periodic for closed curves, Dirichlet otherwise.
BoundaryCondition resolve_bc(const GridSpec& grid, const CurveDefinition& curve);

}  // namespace curveq::app
