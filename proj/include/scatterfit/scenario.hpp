#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "scatterfit/descent.hpp"
#include "scatterfit/model.hpp"
#include "scatterfit/sim.hpp"
#include "scatterfit/waveform.hpp"

namespace scatterfit {

/// Invalid scenario file. `what()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WaveformConfig {
  double bandwidth_hz = 0.0;
  double duration_s = kDefaultPulseDuration;
  double center_frequency_hz = 0.0;
  double amplitude = 1.0;
};

struct GridConfig {
  double b0_m = -5.0;
  double delta_m = 0.0;
  std::size_t m_samples = 0;
};

struct SweepConfig {
  double azimuth_start = 0.0;
  double azimuth_stop = 2.0 * 3.14159265358979323846;
  std::size_t count = 64;
  double elevation = 0.0;
};

struct GeometryConfig {
  /// Explicit sight lines as written in the file (normalized on use), or
  /// empty when `sweep` is used.
  std::vector<Eigen::Vector3d> sightlines;
  std::optional<SweepConfig> sweep;
};

enum class FitStrategy { Coherent, Noncoherent, Sequential };

std::string to_string(FitStrategy s);

struct FitConfig {
  FitStrategy strategy = FitStrategy::Sequential;
  PointScatteringModel initial_model;
  DescentConfig descent;
};

/// A fully resolved scenario: every default is filled in.
struct ScenarioConfig {
  std::string description;
  WaveformConfig waveform;
  GridConfig grid;
  PointScatteringModel truth;
  GeometryConfig geometry;
  NoiseSpec noise;
  std::optional<FitConfig> fit;

  LfmWaveform make_waveform() const;
  RangeGrid make_grid() const;
  std::vector<SightLine> make_sightlines() const;
  /// Noisy observations of the true model, one per sight line.
  StaticPattern make_pattern() const;
  /// Loss weighting: (1/sigma2) I when sigma2 > 0, else I.
  WeightMatrix make_weight() const;
};

/// Parses and validates; unknown keys and missing required fields throw
/// ConfigError naming the JSON path.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

nlohmann::json to_json(const ScenarioConfig& cfg);
nlohmann::json scatterers_to_json(const PointScatteringModel& m);

}  // namespace scatterfit
