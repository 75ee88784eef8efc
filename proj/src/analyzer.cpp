#include "sasbell/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sasbell {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::Matrix2d rotation(double rad) {
  Eigen::Matrix2d r;
  r << std::cos(rad), std::sin(rad), -std::sin(rad), std::cos(rad);
  return r;
}

// (S1, S2, S3) of a normalized Jones vector in the (V, H) basis.
Eigen::Vector3d stokes_vector(const Vector2c& e) {
  return {std::norm(e[0]) - std::norm(e[1]), 2.0 * (std::conj(e[0]) * e[1]).real(),
          2.0 * (std::conj(e[0]) * e[1]).imag()};
}

double overlap(const Vector2c& a, const Vector2c& b) { return std::norm(a.dot(b)); }

}  // namespace

Matrix2c waveplate_jones(double angle_deg, double retardance_rad) {
  const Eigen::Matrix2cd r = rotation(angle_deg * kDeg).cast<Complex>();
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = std::polar(1.0, -0.5 * retardance_rad);
  d(1, 1) = std::polar(1.0, 0.5 * retardance_rad);
  return r.transpose() * d * r;
}

Matrix2c hwp_jones(double angle_deg) { return waveplate_jones(angle_deg, std::numbers::pi); }
Matrix2c qwp_jones(double angle_deg) { return waveplate_jones(angle_deg, 0.5 * std::numbers::pi); }

Matrix2c WaveplateSetting::chain() const { return qwp_jones(qwp_deg) * hwp_jones(hwp_deg); }

WaveplateSetting WaveplateSetting::linear_analyzer(double angle_deg) { return {0.5 * angle_deg, 0.0}; }

WaveplateSetting WaveplateSetting::for_state(const JonesVector& target) {
  // The QWP fixes the ellipticity (|S3| = sin 2q, sign flipped by the HWP);
  // the HWP then reflects the ellipse orientation, psi -> 2h - psi.
  const Vector2c& e = target.components();
  const Eigen::Vector3d se = stokes_vector(e);
  const double chi = 0.5 * std::asin(std::clamp(se[2], -1.0, 1.0)) / kDeg;
  const double psi_e = 0.5 * std::atan2(se[1], se[0]) / kDeg;

  WaveplateSetting best;
  double best_overlap = -1.0;
  for (double q : {-chi, chi}) {
    const Vector2c g = qwp_jones(q).adjoint() * Vector2c(1.0, 0.0);
    const Eigen::Vector3d sg = stokes_vector(g);
    const double psi_g = 0.5 * std::atan2(sg[1], sg[0]) / kDeg;
    for (double h : {0.5 * (psi_e + psi_g), 0.5 * (psi_e - psi_g)}) {
      const WaveplateSetting cand{h, q};
      const double ov = overlap(analyzer_state(cand, Port::reflected), e);
      if (ov > best_overlap) {
        best_overlap = ov;
        best = cand;
      }
    }
  }
  return best;
}

Vector2c analyzer_state(const WaveplateSetting& plates, Port port) {
  const Vector2c p = port == Port::reflected ? Vector2c(1.0, 0.0) : Vector2c(0.0, 1.0);
  return plates.chain().adjoint() * p;
}

Matrix2c arm_projector(const WaveplateSetting& plates, Port port) {
  const Vector2c e = analyzer_state(plates, port);
  return e * e.adjoint();
}

namespace {

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

}  // namespace

double joint_probability(const DensityMatrix4& rho, const AnalyzerSetting& setting) {
  const Matrix4c p = kron(arm_projector(setting.stokes.plates, setting.stokes.port),
                          arm_projector(setting.antistokes.plates, setting.antistokes.port));
  return std::clamp((rho.matrix() * p).trace().real(), 0.0, 1.0);
}

Matrix4c joint_projector(const MeasurementSetting& setting, Port s, Port a) {
  return kron(arm_projector(setting.stokes, s), arm_projector(setting.antistokes, a));
}

std::array<double, 4> outcome_probabilities(const DensityMatrix4& rho, const MeasurementSetting& setting) {
  std::array<double, 4> out{};
  for (Port s : kPorts)
    for (Port a : kPorts) out[outcome_index(s, a)] = joint_probability(rho, setting.with_ports(s, a));
  return out;
}

double reflected_probability(const Matrix2c& sigma, const WaveplateSetting& plates) {
  const Vector2c e = analyzer_state(plates, Port::reflected);
  return std::clamp(e.dot(sigma * e).real(), 0.0, 1.0);
}

}  // namespace sasbell
