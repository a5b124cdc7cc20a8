#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ottoforge/optimizer.hpp"

namespace ottoforge {

using Json = nlohmann::ordered_json;

enum class TaskKind { Validate, Optimize, SweepPeriod, Contour, ManyQubit };

std::string to_string(TaskKind k);
TaskKind task_kind_from_string(const std::string& s);

struct PeriodGrid {
  std::vector<double> values;  // resolved, ascending
};

struct TaskConfig {
  TaskKind kind = TaskKind::Optimize;
  PeriodGrid periods;                         // sweep-period
  int resolution = 256;                       // contour
  std::string machine = "fridge";             // many-qubit: engine | fridge
  std::vector<int> qubits;                    // many-qubit n values
};

struct ScenarioConfig {
  Json units;  // free-form echo block
  ThermalModel model;
  GapWeights weights;
  OptimizerSettings optimizer;
  TaskConfig task;

  /// Lossless round-trip form (parse -> serialize -> parse is identical).
  Json to_json() const;
};

/// Strict schema walk: unknown keys are rejected, every diagnostic carries
/// the config path of the offending field.
ScenarioConfig parse_config(const Json& j);
ScenarioConfig load_config(const std::string& path);

/// Apply a dotted-path override such as "optimizer.seed=7" or
/// "model.baths.0.beta=0.5". Values parse as JSON when possible.
void apply_override(Json& j, const std::string& assignment);

}  // namespace ottoforge
