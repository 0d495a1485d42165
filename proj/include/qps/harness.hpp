#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qps/dynamics.hpp"
#include "qps/environment.hpp"

namespace qps {

enum class Model { Classical, Qm1, Qm2 };
enum class Interaction { None, Mode1, Mode2 };

/// One experiment, fully specified. Defaults are the documented ones; a
/// config file only overrides what it names.
struct ExperimentConfig {
  Model model = Model::Classical;
  int trials = 100;
  int agents = 100;
  double damping = 0.01;
  double reward = 1.0;
  double kappa = 0.0;
  double decay = 0.0;
  double t_max = 6.283185307179586;  // 2 pi
  int grid_points = 401;
  int d = 2;  // qm2 percept-register dimension
  Interaction interaction = Interaction::None;
  std::uint64_t seed = 1;
  PeakStrategy peak_strategy = PeakStrategy::FirstLocalMax;
  EfficiencySource efficiency_source = EfficiencySource::Probability;

  void validate() const;
  /// Number of game symbols implied by the model (qm2 plays over d symbols).
  int n_symbols() const { return model == Model::Qm2 ? d : 2; }
};

/// Parses "key = value" lines with '#' comments. Unknown keys, malformed
/// lines and out-of-range values are reported with their line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical echo of a config; parsing it back reproduces the config.
std::string resolved_config_text(const ExperimentConfig& config);

/// Curves produced by one run: one per agent role (two for interacting runs).
struct EnsembleResult {
  std::vector<LearningCurve> curves;
};

/// Runs `agents` independent members, each on child stream (seed, index),
/// and aggregates in member order. Output is bit-identical for any thread
/// count. Failures carry the member index and trial number.
EnsembleResult run_ensemble(const ExperimentConfig& config, int threads = 1);

/// CSV: header "trial,mean,std,p0_mean,...", 9-decimal values, LF endings.
void emit_csv(const LearningCurve& curve, std::ostream& out);
std::string curve_to_csv(const LearningCurve& curve);
void write_csv_file(const LearningCurve& curve, const std::string& path);
LearningCurve parse_csv(std::string_view text);

/// Standalone SVG line plot of the mean with a +-1 std band.
void emit_svg(const LearningCurve& curve, std::ostream& out);
void write_svg_file(const LearningCurve& curve, const std::string& path);

}  // namespace qps
