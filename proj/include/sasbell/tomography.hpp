#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sasbell/analyzer.hpp"
#include "sasbell/polarization.hpp"
#include "sasbell/simulation.hpp"

namespace sasbell {

/// One analyzer configuration and its four port counts in (++, +-, -+, --)
/// order. Counts are real so that noiseless expected values can be fed in.
struct TomographyRecord {
  MeasurementSetting setting;
  std::array<double, 4> counts{};
};

using TomographySet = std::vector<TomographyRecord>;

enum class TomographyPlan {
  full36,     // every pair of the six states V, H, D, A, R, L
  reduced16,  // pairs of V, H, D, R
};

/// Waveplates sending one of "V", "H", "D", "A", "R", "L" to the reflected port.
WaveplateSetting tomography_plates(char label);
/// Settings with ids such as "VD" (Stokes label first).
std::vector<MeasurementSetting> tomography_settings(TomographyPlan plan);

TomographyRecord record_from_counts(const MeasurementSetting& setting, const CoincidenceCounts& counts);
/// Born-rule expectations scaled to `counts_per_setting`, i.e. noiseless data.
TomographySet expected_tomography(const DensityMatrix4& rho, TomographyPlan plan, double counts_per_setting = 1.0);

/// Nearest physical state in the 2-norm (eigenvalue clipping with
/// redistribution of the negative weight).
DensityMatrix4 project_to_physical(const Matrix4c& m);

struct LinearReconstruction {
  /// Hermitian and unit trace; positivity is not guaranteed.
  Matrix4c rho;
  double min_eigenvalue = 0.0;
  /// Ratio of extreme singular values of the measurement matrix.
  double condition_number = 0.0;

  DensityMatrix4 physical() const { return project_to_physical(rho); }
};

/// Least-squares inversion of the per-setting outcome frequencies. Throws
/// IncompleteSettings when the settings do not span the two-qubit operator
/// space and InsufficientData when a setting has no counts.
LinearReconstruction tomography_linear(std::span<const TomographyRecord> data);

struct MleOptions {
  /// Stop once the relative log-likelihood gain of an accepted step drops below tol.
  double tol = 1e-9;
  int max_iter = 5000;
};

struct MleResult {
  DensityMatrix4 rho;
  double log_likelihood = 0.0;
  int iterations = 0;
  /// false: max_iter was reached, `rho` is the best iterate.
  bool converged = false;
  std::vector<double> log_likelihood_trace;
};

/// Multinomial maximum likelihood over physical states via the diluted
/// R rho R iteration, started from the projected linear estimate. Accepted
/// steps never lower the likelihood.
MleResult tomography_mle(std::span<const TomographyRecord> data, const MleOptions& options = {});

double log_likelihood(const DensityMatrix4& rho, std::span<const TomographyRecord> data);

}  // namespace sasbell
