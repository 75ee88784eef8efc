#include "sasbell/crystal.hpp"

#include <cmath>
#include <numbers>

namespace sasbell {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Complex raman_lineshape(double detuning, double gamma) { return 1.0 / Complex(detuning, -0.5 * gamma); }

}  // namespace

CrystalOrientation::CrystalOrientation(double theta_deg) : theta_deg_(theta_deg) {
  if (!std::isfinite(theta_deg)) throw Error(ErrorKind::config_error, "crystal orientation must be finite");
}

double CrystalOrientation::reduced_degrees() const {
  double r = std::fmod(theta_deg_, 90.0);
  if (r < 0.0) r += 90.0;
  if (r >= 90.0) r -= 90.0;
  return r;
}

void SpectralConfig::validate() const {
  if (!(shift_cm > 0.0)) throw Error(ErrorKind::config_error, "spectral shift must be positive");
  if (!(gamma_phonon_cm > 0.0)) throw Error(ErrorKind::config_error, "phonon linewidth must be positive");
  if (!(omega_laser_cm > shift_cm)) throw Error(ErrorKind::config_error, "shift exceeds laser wavenumber");
  if (!std::isfinite(omega_phonon_cm)) throw Error(ErrorKind::config_error, "phonon energy must be finite");
}

PathAmplitudes::PathAmplitudes(Complex electronic_amp, Complex raman_amp)
    : electronic(electronic_amp), raman(raman_amp) {
  if (electronic == 0.0 && raman == 0.0) {
    throw Error(ErrorKind::degenerate_input, "both path amplitudes vanish");
  }
}

Eigen::Matrix2d raman_tensor_lab(const CrystalOrientation& theta) {
  const double t2 = 2.0 * theta.degrees() * kDeg;
  Eigen::Matrix2d m;
  m << std::sin(t2), std::cos(t2), std::cos(t2), -std::sin(t2);
  return m;
}

Eigen::Matrix2d electronic_tensor_lab(const CrystalOrientation&) { return Eigen::Matrix2d::Identity(); }

WeightModelParams calibrate(const WeightModelParams& model, const SpectralConfig& spectral) {
  if (!(model.anchor_ratio >= 0.0)) throw Error(ErrorKind::config_error, "anchor ratio must be non-negative");
  if (!(model.decay_width_cm > 0.0)) throw Error(ErrorKind::config_error, "decay width must be positive");
  const double ae = model.g_e * std::exp(-model.anchor_shift_cm / model.decay_width_cm);
  const double shape =
      std::abs(raman_lineshape(spectral.omega_phonon_cm - model.anchor_shift_cm, spectral.gamma_phonon_cm));
  WeightModelParams out = model;
  // laser V at theta = 0: VV carries A_e, HH carries A_R
  out.g_r = std::sqrt(model.anchor_ratio) * std::abs(ae) / shape;
  return out;
}

PathAmplitudes path_amplitudes(const SpectralConfig& spectral, const WeightModelParams& model) {
  spectral.validate();
  const WeightModelParams m = model.g_r ? model : calibrate(model, spectral);
  const double ae_mag = m.g_e * std::exp(-spectral.shift_cm / m.decay_width_cm);
  const Complex electronic = std::polar(ae_mag, m.relative_phase_deg * kDeg);

  const Complex anchor_shape = raman_lineshape(spectral.omega_phonon_cm - m.anchor_shift_cm, spectral.gamma_phonon_cm);
  const Complex anchor_phase = std::conj(anchor_shape) / std::abs(anchor_shape);
  const Complex raman = *m.g_r * anchor_phase * raman_lineshape(spectral.detuning_cm(), spectral.gamma_phonon_cm);
  return {electronic, raman};
}

Vector4c sas_amplitudes_unnormalized(const JonesVector& laser, const CrystalOrientation& theta,
                                     const PathAmplitudes& amps) {
  const Vector2c l = laser.components();
  const Vector2c e = electronic_tensor_lab(theta).cast<Complex>() * l;
  const Vector2c r = raman_tensor_lab(theta).cast<Complex>() * l;
  Vector4c out;
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a) out[2 * s + a] = amps.electronic * e[s] * e[a] + amps.raman * r[s] * r[a];
  return out;
}

TwoPhotonState generate_sas_state(const JonesVector& laser, const CrystalOrientation& theta,
                                  const PathAmplitudes& amps) {
  const Vector4c raw = sas_amplitudes_unnormalized(laser, theta, amps);
  // relative to the path magnitudes so that exact cancellation is caught through rounding
  const double scale = std::abs(amps.electronic) + std::abs(amps.raman);
  if (raw.norm() <= 1e-12 * scale) throw Error(ErrorKind::degenerate_input, "both scattering paths vanish");
  return TwoPhotonState(raw);
}

double pair_brightness(const JonesVector& laser, const CrystalOrientation& theta, const PathAmplitudes& amps) {
  return sas_amplitudes_unnormalized(laser, theta, amps).squaredNorm();
}

Matrix2c raman_single_state(const JonesVector& laser, const CrystalOrientation& theta) {
  const Vector2c r = raman_tensor_lab(theta).cast<Complex>() * laser.components();
  if (r.norm() < 1e-12) return unpolarized();
  return single_density(JonesVector(r));
}

}  // namespace sasbell
