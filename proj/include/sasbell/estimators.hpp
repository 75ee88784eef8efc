#pragma once

#include <array>

#include "sasbell/analyzer.hpp"
#include "sasbell/polarization.hpp"
#include "sasbell/simulation.hpp"

namespace sasbell {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// E = (n_pp + n_mm - n_pm - n_mp) / total with Poisson-propagated error
/// sqrt((1 - E^2) / total). Throws InsufficientData for an empty table.
Estimate correlation_E(const CoincidenceCounts& counts);

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'); errors added in quadrature.
/// Input order: (a,b), (a,b'), (a',b), (a',b').
Estimate chsh_S(const std::array<Estimate, 4>& e);

/// S from four count tables with the standard error replaced by the spread of
/// `resamples` multinomial bootstrap replicates. Cross-check for chsh_S.
Estimate chsh_bootstrap(const std::array<CoincidenceCounts, 4>& counts, int resamples, std::uint64_t seed);

/// Analyzer bases for the CHSH test. Each arm's "+" outcome projects onto
/// cos(x) V + e^{i phase} sin(x) H; with zero phase these are linear
/// analyzers at angle x from V. The phase is applied on the Stokes arm only.
struct ChshSettings {
  double a_deg = 0.0;
  double a_prime_deg = 45.0;
  double b_deg = 22.5;
  double b_prime_deg = 67.5;
  double stokes_phase_deg = 0.0;

  static ChshSettings canonical() { return {}; }

  /// The four settings in the order (a,b), (a,b'), (a',b), (a',b') with ids
  /// "a-b", "a-b'", "a'-b", "a'-b'".
  std::array<MeasurementSetting, 4> measurement_settings() const;
};

/// Born-rule correlation for the given arm angles.
double correlation_value(const DensityMatrix4& rho, const MeasurementSetting& setting);
/// Born-rule CHSH value for `settings`.
double chsh_value(const DensityMatrix4& rho, const ChshSettings& settings);

struct OptimalChsh {
  double s_max = 0.0;
  ChshSettings settings;
};

/// Closed form for c1|VV> + c2|HH>: S_max = 2 sqrt(1 + 4 |c1|^2 |c2|^2), with
/// a = 0, a' = 45 deg, b = atan(k)/2, b' = 90 deg - atan(k)/2, k = 2|c1 c2|,
/// and the Stokes phase set to arg(c2/c1). Throws DegenerateInput when the
/// state has VH/HV amplitude above 1e-9.
OptimalChsh predict_optimal_S(const TwoPhotonState& psi);

/// Gradient-free maximization of |S| over the four analyzer angles for any
/// state. The Stokes phase is fixed to the phase of <HH|rho|VV> before the
/// search. Returns settings whose S is positive.
OptimalChsh maximize_chsh(const DensityMatrix4& rho);

}  // namespace sasbell
