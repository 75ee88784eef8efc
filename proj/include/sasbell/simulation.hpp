#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sasbell/analyzer.hpp"
#include "sasbell/crystal.hpp"
#include "sasbell/polarization.hpp"

namespace sasbell {

/// Per-pulse probabilities of the photon sources and detector parameters.
/// Detection efficiencies include the 50/50 routing beamsplitter in front of
/// the two arms. Dark counts are per detector (two detectors per arm).
struct SourceRates {
  double p_pair = 0.0;
  double p_s_single = 0.0;
  double p_as_single = 0.0;
  /// Probability that a pair is accompanied by an extra uncorrelated Stokes photon.
  double p_triple = 0.0;
  double eta_s = 1.0;
  double eta_as = 1.0;
  double dark_s = 0.0;
  double dark_as = 0.0;
  double rep_period_ns = 13.158;

  /// Throws InvalidRates. Probabilities must lie in [0, 1] and the pulse
  /// occupancy p_pair + p_s_single + p_as_single must stay below 0.5 whenever
  /// more than one of those sources is active.
  void validate() const;
};

/// Everything the detection record depends on apart from the analyzers.
struct SourceModel {
  DensityMatrix4 pair;
  SourceRates rates;
  /// Polarization of uncorrelated Stokes photons (singles and the extra photon of triple events).
  Matrix2c stokes_single = unpolarized();
  Matrix2c antistokes_single = unpolarized();

  /// Stokes singles follow the Raman path output for this laser and
  /// orientation; anti-Stokes singles are unpolarized.
  static SourceModel for_crystal(const DensityMatrix4& pair, const SourceRates& rates, const JonesVector& laser,
                                 const CrystalOrientation& theta);
};

struct CoincidenceCounts {
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;
  std::uint64_t n_pulses = 0;

  std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
  /// Outcome in the (++, +-, -+, --) order.
  std::uint64_t at(int outcome) const;
  std::uint64_t& at(int outcome);
  CoincidenceCounts& operator+=(const CoincidenceCounts& other);
  bool operator==(const CoincidenceCounts&) const = default;
};

/// Coincidences between a Stokes click at pulse n and an anti-Stokes click at
/// pulse n + k, for k in [-max_delay, max_delay].
struct DelayHistogram {
  int max_delay = 0;
  std::vector<std::uint64_t> counts;

  explicit DelayHistogram(int k = 0) : max_delay(k), counts(2 * static_cast<std::size_t>(k) + 1, 0) {}
  std::uint64_t at(int delay) const { return counts.at(static_cast<std::size_t>(delay + max_delay)); }
  std::uint64_t& at(int delay) { return counts.at(static_cast<std::size_t>(delay + max_delay)); }
  bool operator==(const DelayHistogram&) const = default;
};

struct SimulationOptions {
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned workers = 0;
};

/// Pulsed detection record through the analyzers of `setting`, reduced to the
/// four same-pulse coincidence counts. Each arm has a detector on both PBS
/// ports; a pulse in which both detectors of an arm fire is assigned to one of
/// the two ports at random. Deterministic for a fixed seed.
CoincidenceCounts simulate_counts(const SourceModel& model, const MeasurementSetting& setting, std::uint64_t n_pulses,
                                  std::uint64_t seed, const SimulationOptions& options = {});

/// Arm clicks (any port) correlated over pulse delays.
DelayHistogram delay_histogram(const SourceModel& model, std::uint64_t n_pulses, int max_delay, std::uint64_t seed,
                               const SimulationOptions& options = {});

struct G2Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// bin(0) / mean(bins k != 0) with Poisson errors. Throws InsufficientData
/// when every off-center bin is empty or there are none.
G2Estimate g2_zero(const DelayHistogram& h);

/// Analytic post-selected two-photon state of the coincidence record: the
/// Born-rule statistics of `rho` reproduce the expected simulated coincidence
/// frequencies for any analyzer setting (exact while no arm sees more than
/// two click sources in one pulse).
struct EffectiveState {
  DensityMatrix4 rho;
  /// Probability per pulse that both arms register an outcome.
  double coincidence_probability = 0.0;
  /// Share of coincidences in which both registered photons come from one pair
  /// with no other click source present.
  double clean_pair_fraction = 0.0;
};

EffectiveState effective_coincidence_state(const SourceModel& model);

/// p_triple in [0, 1] for which the effective state reaches `target_purity`.
/// Throws ConfigError when the target is outside the reachable range.
double tune_triple_probability(const SourceModel& model, double target_purity);

}  // namespace sasbell
