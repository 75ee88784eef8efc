#pragma once

#include <optional>

#include <Eigen/Dense>

#include "sasbell/polarization.hpp"

namespace sasbell {

/// Angle between the diamond [100] axis and the lab V axis, beam along [001].
/// The stored angle is kept as given; the pair response repeats every 90 deg
/// and `reduced_degrees` maps into [0, 90).
class CrystalOrientation {
 public:
  explicit CrystalOrientation(double theta_deg = 0.0);

  double degrees() const { return theta_deg_; }
  double reduced_degrees() const;

 private:
  double theta_deg_;
};

/// Wavenumbers in cm^-1.
struct SpectralConfig {
  double omega_laser_cm = 1.0e7 / 785.0;
  double shift_cm = 900.0;  // |omega_{S,aS} - omega_L|
  double omega_phonon_cm = 1332.0;
  /// Effective width of the Raman-path response over the detection band.
  double gamma_phonon_cm = 700.0;

  void validate() const;
  double omega_stokes_cm() const { return omega_laser_cm - shift_cm; }
  double omega_antistokes_cm() const { return omega_laser_cm + shift_cm; }
  /// omega_ph - shift; zero on the Raman resonance.
  double detuning_cm() const { return omega_phonon_cm - shift_cm; }
};

/// Two-path weight model. The Raman path is a driven-oscillator Lorentzian in
/// detuning, A_R = g_R e^{i phi_a} / (Delta - i gamma/2), where phi_a makes
/// A_R real and positive at the calibration anchor. The electronic path is
/// A_e = g_e exp(-shift / w) e^{i phase}.
struct WeightModelParams {
  double g_e = 1.0;
  /// Unset means "calibrate against the anchor ratio".
  std::optional<double> g_r;
  double decay_width_cm = 8000.0;
  double relative_phase_deg = 0.0;
  double anchor_shift_cm = 900.0;
  /// |c2|^2 / |c1|^2 for laser V, theta = 0 at the anchor shift.
  double anchor_ratio = 0.28 / 0.72;
};

struct PathAmplitudes {
  Complex electronic;
  Complex raman;

  PathAmplitudes(Complex electronic_amp, Complex raman_amp);
};

/// Raman tensor of the in-plane T2g partner, [[0,1],[1,0]] in the crystal
/// frame, rotated into the lab (V, H) frame: [[sin 2t, cos 2t], [cos 2t, -sin 2t]].
Eigen::Matrix2d raman_tensor_lab(const CrystalOrientation& theta);

/// Transverse electronic susceptibility of a cubic crystal: identity for every theta.
Eigen::Matrix2d electronic_tensor_lab(const CrystalOrientation& theta);

/// Returns `model` with g_r fixed so that the anchor ratio is reproduced.
/// The spectral lineshape (gamma, omega_phonon) is taken from `spectral`.
WeightModelParams calibrate(const WeightModelParams& model, const SpectralConfig& spectral);

/// Evaluates both path amplitudes at `spectral.shift_cm`. Calibrates first if
/// `model.g_r` is unset.
PathAmplitudes path_amplitudes(const SpectralConfig& spectral, const WeightModelParams& model);

/// A_e (chi L)(x)(chi L) + A_R (alpha L)(x)(alpha L) before normalization.
Vector4c sas_amplitudes_unnormalized(const JonesVector& laser, const CrystalOrientation& theta,
                                     const PathAmplitudes& amps);

/// Normalized pair state. Throws DegenerateInput when the paths vanish or cancel.
TwoPhotonState generate_sas_state(const JonesVector& laser, const CrystalOrientation& theta,
                                  const PathAmplitudes& amps);

/// Squared norm of the unnormalized pair amplitude; proportional to the pair rate.
double pair_brightness(const JonesVector& laser, const CrystalOrientation& theta, const PathAmplitudes& amps);

/// Polarization of a single Raman-scattered Stokes photon, alpha L / |alpha L|.
/// Returns the unpolarized state when alpha L vanishes.
Matrix2c raman_single_state(const JonesVector& laser, const CrystalOrientation& theta);

}  // namespace sasbell
