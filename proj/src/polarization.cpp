#include "sasbell/polarization.hpp"

#include <cmath>
#include <numbers>

namespace sasbell {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

JonesVector JonesVector::linear(double angle_deg) {
  const double t = deg2rad(angle_deg);
  return {std::cos(t), std::sin(t)};
}

JonesVector JonesVector::right_circular() { return {kInvSqrt2, Complex(0.0, -kInvSqrt2)}; }
JonesVector JonesVector::left_circular() { return {kInvSqrt2, Complex(0.0, kInvSqrt2)}; }

TwoPhotonState TwoPhotonState::basis(PairBasis b) {
  Vector4c a = Vector4c::Zero();
  a[index(b)] = 1.0;
  return TwoPhotonState(a);
}

TwoPhotonState TwoPhotonState::phi_plus() { return TwoPhotonState(Vector4c(1.0, 0.0, 0.0, 1.0)); }
TwoPhotonState TwoPhotonState::phi_minus() { return TwoPhotonState(Vector4c(1.0, 0.0, 0.0, -1.0)); }
TwoPhotonState TwoPhotonState::psi_plus() { return TwoPhotonState(Vector4c(0.0, 1.0, 1.0, 0.0)); }
TwoPhotonState TwoPhotonState::psi_minus() { return TwoPhotonState(Vector4c(0.0, 1.0, -1.0, 0.0)); }

TwoPhotonState TwoPhotonState::schmidt(Complex c1, Complex c2) {
  return TwoPhotonState(Vector4c(c1, 0.0, 0.0, c2));
}

PhysicalityReport check_physicality(const Matrix4c& m) {
  PhysicalityReport r;
  r.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  r.trace_error = std::abs(m.trace() - Complex(1.0));
  const Matrix4c h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

DensityMatrix4 DensityMatrix4::from_matrix(const Matrix4c& m) {
  const PhysicalityReport r = check_physicality(m);
  if (!r.physical()) {
    throw Error(ErrorKind::unphysical_state,
                "density matrix violates invariants (hermiticity error " +
                    std::to_string(r.hermiticity_error) + ", trace error " +
                    std::to_string(r.trace_error) + ", min eigenvalue " +
                    std::to_string(r.min_eigenvalue) + ")");
  }
  return DensityMatrix4(0.5 * (m + m.adjoint()));
}

DensityMatrix4 DensityMatrix4::maximally_mixed() { return DensityMatrix4(Matrix4c::Identity() / 4.0); }

DensityMatrix4 DensityMatrix4::product(const Matrix2c& stokes, const Matrix2c& antistokes) {
  Matrix4c m;
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) m(2 * s + a, 2 * sp + ap) = stokes(s, sp) * antistokes(a, ap);
  return from_matrix(m);
}

Eigen::Vector4d DensityMatrix4::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

TwoPhotonState tensor_product(const JonesVector& stokes, const JonesVector& antistokes) {
  Vector4c a;
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) a[2 * s + t] = stokes.components()[s] * antistokes.components()[t];
  return TwoPhotonState(a);
}

DensityMatrix4 density_from_pure(const TwoPhotonState& psi) {
  return DensityMatrix4::from_matrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix4 mix(std::span<const WeightedState> components) {
  if (components.empty()) throw Error(ErrorKind::invalid_mixture, "empty mixture");
  double total = 0.0;
  Matrix4c m = Matrix4c::Zero();
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw Error(ErrorKind::invalid_mixture, "negative mixture weight");
    total += c.weight;
    m += c.weight * c.rho.matrix();
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_mixture, "mixture weights sum to " + std::to_string(total));
  }
  return DensityMatrix4::from_matrix(m / total);
}

DensityMatrix4 werner_state(double p, const TwoPhotonState& target) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_mixture, "Werner weight outside [0, 1]");
  const WeightedState parts[] = {{p, density_from_pure(target)}, {1.0 - p, DensityMatrix4::maximally_mixed()}};
  return mix(parts);
}

double purity(const DensityMatrix4& rho) {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().cwiseAbs2().sum();
}

double fidelity_to_pure(const DensityMatrix4& rho, const TwoPhotonState& psi) {
  const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return f.real();
}

BellDecomposition bell_decomposition(const TwoPhotonState& psi) {
  const Vector4c& a = psi.amplitudes();
  const auto vv = a[index(PairBasis::VV)], vh = a[index(PairBasis::VH)];
  const auto hv = a[index(PairBasis::HV)], hh = a[index(PairBasis::HH)];
  return {Vector4c((vv + hh) * kInvSqrt2, (vv - hh) * kInvSqrt2, (vh + hv) * kInvSqrt2,
                   (vh - hv) * kInvSqrt2)};
}

Matrix2c single_density(const JonesVector& v) { return v.components() * v.components().adjoint(); }

Matrix2c unpolarized() { return Matrix2c::Identity() / 2.0; }

Matrix2c reduced_stokes(const DensityMatrix4& rho) {
  Matrix2c r = Matrix2c::Zero();
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp)
      for (int a = 0; a < 2; ++a) r(s, sp) += rho(2 * s + a, 2 * sp + a);
  return r;
}

Matrix2c reduced_antistokes(const DensityMatrix4& rho) {
  Matrix2c r = Matrix2c::Zero();
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int s = 0; s < 2; ++s) r(a, ap) += rho(2 * s + a, 2 * s + ap);
  return r;
}

}  // namespace sasbell
