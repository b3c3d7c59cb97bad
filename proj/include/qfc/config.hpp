#pragma once

// JSON configuration and plan files. Unknown keys are rejected everywhere.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfc/cascade.hpp"
#include "qfc/detector.hpp"
#include "qfc/model.hpp"
#include "qfc/optimizer.hpp"
#include "qfc/pump.hpp"
#include "qfc/schmidt.hpp"

namespace qfc {

using json = nlohmann::json;

/// Where a cascade input mode comes from.
struct ModeSpec {
  enum class Kind { Schmidt, Envelope };
  Kind kind = Kind::Schmidt;
  std::size_t stage = 0;  // Schmidt: which stage's input modes
  std::size_t index = 0;  // Schmidt: which mode
  PumpShape envelope;     // Envelope: any pump-shape expression, normalized on use
};

struct InputSpec {
  ModeSpec mode;
  std::variant<Fock, Coherent> statistics;
};

struct StageSpec {
  PumpShape pump;
  std::optional<DetectorModel> detector;
};

struct CascadeSection {
  std::vector<StageSpec> stages;
  std::vector<InputSpec> inputs;
};

struct OptimizeSection {
  PumpFamily family;  // carrier taken from the config pump
  Objective objective;
  std::vector<std::pair<double, double>> bounds;
  std::size_t budget = 100;
  std::size_t restarts = 5;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
};

struct RunConfig {
  WaveguideParams waveguide;
  TimeGrid grid;
  ZGrid zgrid;
  std::optional<PumpShape> pump;
  std::optional<DetectorModel> detector;
  std::optional<CascadeSection> cascade;
  std::optional<OptimizeSection> optimize;
  DecomposeOptions analysis;

  /// The pump, or ConfigError when the config has none.
  const PumpShape& require_pump() const;
};

PumpShape pump_from_json(const json& j);
json pump_to_json(const PumpShape& pump);

DetectorModel detector_from_json(const json& j);
json detector_to_json(const DetectorModel& det);

/// Parses and validates (hard errors throw ConfigError). Validation warnings
/// are appended to `warnings` when given.
RunConfig config_from_json(const json& j, std::vector<std::string>* warnings = nullptr);
RunConfig load_config(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Builds the stages (kernels included) and resolves the input modes.
struct ResolvedCascade {
  std::vector<Stage> stages;
  std::vector<InputState> inputs;
};
ResolvedCascade resolve_cascade(const RunConfig& config);

OptimizationProblem optimization_problem(const RunConfig& config);
json result_to_json(const OptimizationResult& result);

json distribution_to_json(const CountDistribution& dist);

}  // namespace qfc
