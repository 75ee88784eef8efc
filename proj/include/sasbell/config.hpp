#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sasbell/analyzer.hpp"
#include "sasbell/crystal.hpp"
#include "sasbell/estimators.hpp"
#include "sasbell/simulation.hpp"
#include "sasbell/tomography.hpp"

namespace sasbell {

enum class PairSource { crystal, werner };
enum class RunMode { basis, chsh, tomography };
enum class ChshAngles { canonical, optimal, custom };
enum class TomographyMethod { mle, linear };
enum class SweepParameter { theta, shift };

/// Polarization of uncorrelated photons: "raman" (Stokes arm only),
/// "unpolarized" or a state label V, H, D, A, R, L.
struct SinglesPolarization {
  std::string stokes = "raman";
  std::string antistokes = "unpolarized";
};

struct ExperimentConfig {
  double theta_deg = 0.0;
  JonesVector laser = JonesVector::vertical();
  SpectralConfig spectral;
  WeightModelParams model;

  PairSource source = PairSource::crystal;
  double werner_p = 1.0;

  SourceRates rates;
  SinglesPolarization singles;
  /// When set, p_triple is tuned so the post-selected state has this purity.
  std::optional<double> target_purity;

  RunMode mode = RunMode::basis;
  /// Analyzer settings for basis mode, as two-letter state labels ("VH").
  std::vector<std::string> analyzer_settings{"VV", "VH", "HV", "HH"};

  ChshAngles chsh_angles = ChshAngles::canonical;
  ChshSettings chsh;

  TomographyPlan tomography_plan = TomographyPlan::full36;
  TomographyMethod tomography_method = TomographyMethod::mle;
  MleOptions mle;

  int g2_max_delay = 10;

  std::uint64_t n_pulses = 0;
  std::uint64_t seed = 1;
  unsigned workers = 0;

  SweepParameter sweep_parameter = SweepParameter::theta;
  double sweep_start = 0.0;
  double sweep_stop = 90.0;
  double sweep_step = 5.0;
  double sweep_calibration = 1.0;

  /// FNV-1a over the sorted key = value pairs, independent of comments,
  /// ordering and whitespace.
  std::uint64_t hash = 0;
};

/// Parses the flat `key = value` format. Every problem in the text is
/// collected and reported in one ConfigError (line numbers and keys).
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Keys accepted by parse_config, sorted.
std::vector<std::string> config_keys();
std::vector<std::string> required_config_keys();

/// Built-in scenarios; the text is an ordinary config file.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
std::string preset_text(std::string_view name);
ExperimentConfig load_preset(std::string_view name);

/// Pair state, singles polarizations and rates (with p_triple tuned when a
/// target purity is configured), for the configured theta and shift.
SourceModel build_source(const ExperimentConfig& config);
/// Same, with the orientation and shift overridden.
SourceModel build_source(const ExperimentConfig& config, double theta_deg, double shift_cm);

/// Settings measured in the configured mode. For optimal CHSH angles this
/// maximizes S on the post-selected state of `source`.
std::vector<MeasurementSetting> mode_settings(const ExperimentConfig& config, const SourceModel& source);
ChshSettings resolved_chsh(const ExperimentConfig& config, const SourceModel& source);

/// Basis settings from two-letter labels such as "VH".
MeasurementSetting label_setting(std::string_view label);

}  // namespace sasbell
