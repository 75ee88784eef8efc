#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sasbell/config.hpp"
#include "sasbell/csv_io.hpp"
#include "sasbell/estimators.hpp"
#include "sasbell/tomography.hpp"

namespace sasbell {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  /// Counts or histogram CSV for the analysis commands.
  std::optional<std::filesystem::path> input;
  /// Where the config came from (file path or preset:name), for metadata.
  std::string config_origin;
};

struct RunOutput {
  std::string summary;
  std::vector<std::filesystem::path> files;
  /// 0, or 4 when an iterative reconstruction stopped at max_iter.
  int exit_code = 0;
};

/// Process exit status for an error: 2 configuration, 3 data, 4 convergence.
int exit_code_for(ErrorKind kind);

/// One simulated row per setting; setting i uses the sub-seed
/// derive_seed(config.seed, i + 1).
std::vector<CountsRow> simulate_rows(const ExperimentConfig& config, const SourceModel& source,
                                     const std::vector<MeasurementSetting>& settings);

struct ChshReport {
  std::array<Estimate, 4> e;
  Estimate s;
};

/// Rows are matched by the ids "a-b", "a-b'", "a'-b", "a'-b'"; a file with
/// exactly four rows and other ids is taken in that order.
ChshReport analyze_chsh(const std::vector<CountsRow>& rows);

struct TomographyReport {
  DensityMatrix4 rho;
  double purity = 0.0;
  /// phi+, phi-, psi+, psi-
  std::array<double, 4> bell_fidelity{};
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = true;
};

TomographyReport analyze_tomography(const std::vector<CountsRow>& rows, TomographyMethod method,
                                    const MleOptions& options = {});

RunOutput run_simulate(const ExperimentConfig& config, const RunOptions& options);
/// `config` may be null when `options.input` is given.
RunOutput run_chsh(const ExperimentConfig* config, const RunOptions& options);
RunOutput run_tomography(const ExperimentConfig* config, const RunOptions& options);
RunOutput run_g2(const ExperimentConfig* config, const RunOptions& options);
RunOutput run_sweep(const ExperimentConfig& config, const RunOptions& options);

}  // namespace sasbell
