#pragma once

#include <cmath>
#include <complex>
#include <span>

#include <Eigen/Dense>

#include "sasbell/errors.hpp"

namespace sasbell {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

// Single-photon lab basis is (V, H). Two-photon states use the product basis
// (VV, VH, HV, HH) with the Stokes photon as the first tensor factor, so the
// amplitude of |s, a> sits at index 2*s + a (V = 0, H = 1).
enum class PairBasis : int { VV = 0, VH = 1, HV = 2, HH = 3 };

constexpr int index(PairBasis b) { return static_cast<int>(b); }

namespace detail {

// Components smaller than this fraction of the norm do not fix the phase.
inline constexpr double kPhaseThreshold = 1e-12;

template <int N>
Eigen::Matrix<Complex, N, 1> normalize_impl(const Eigen::Matrix<Complex, N, 1>& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::degenerate_input, "cannot normalize a zero or non-finite vector");
  }
  Eigen::Matrix<Complex, N, 1> out = v / n;
  for (int i = 0; i < N; ++i) {
    if (std::abs(out[i]) > kPhaseThreshold) {
      out *= std::conj(out[i]) / std::abs(out[i]);
      out[i] = std::abs(out[i]);
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Unit vector parallel to `v`, with the global phase fixed so that the first
/// nonzero component is real and positive. Throws DegenerateInput for |v| = 0.
inline Vector2c normalize(const Vector2c& v) { return detail::normalize_impl<2>(v); }
inline Vector4c normalize(const Vector4c& v) { return detail::normalize_impl<4>(v); }

/// Normalized single-photon polarization in the (V, H) basis.
class JonesVector {
 public:
  explicit JonesVector(const Vector2c& components) : c_(normalize(components)) {}
  JonesVector(Complex v, Complex h) : JonesVector(Vector2c(v, h)) {}

  static JonesVector vertical() { return {1.0, 0.0}; }
  static JonesVector horizontal() { return {0.0, 1.0}; }
  /// Linear polarization at `angle_deg` measured from V towards H.
  static JonesVector linear(double angle_deg);
  static JonesVector diagonal() { return linear(45.0); }
  static JonesVector antidiagonal() { return linear(-45.0); }
  /// (V - iH)/sqrt(2); the state an analyzer with HWP 0 deg, QWP 45 deg
  /// sends to the reflected port.
  static JonesVector right_circular();
  /// (V + iH)/sqrt(2); selected by HWP 0 deg, QWP -45 deg.
  static JonesVector left_circular();

  const Vector2c& components() const { return c_; }
  Complex v() const { return c_[0]; }
  Complex h() const { return c_[1]; }

 private:
  Vector2c c_;
};

/// Pure polarization state of a Stokes/anti-Stokes pair.
class TwoPhotonState {
 public:
  explicit TwoPhotonState(const Vector4c& amplitudes) : a_(normalize(amplitudes)) {}

  static TwoPhotonState basis(PairBasis b);
  static TwoPhotonState phi_plus();
  static TwoPhotonState phi_minus();
  static TwoPhotonState psi_plus();
  static TwoPhotonState psi_minus();
  /// c1|VV> + c2|HH>; the pair is normalized on construction.
  static TwoPhotonState schmidt(Complex c1, Complex c2);

  const Vector4c& amplitudes() const { return a_; }
  Complex amplitude(PairBasis b) const { return a_[index(b)]; }
  /// |a_VV|^2, |a_VH|^2, |a_HV|^2, |a_HH|^2
  Eigen::Vector4d probabilities() const { return a_.cwiseAbs2(); }

 private:
  Vector4c a_;
};

struct PhysicalityReport {
  double hermiticity_error = 0.0;  // max |rho - rho^dagger| entry
  double trace_error = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;

  bool hermitian_unit_trace() const { return hermiticity_error <= 1e-10 && trace_error <= 1e-10; }
  bool physical() const { return hermitian_unit_trace() && min_eigenvalue >= -1e-9; }
};

PhysicalityReport check_physicality(const Matrix4c& m);

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix in the pair basis.
/// The invariants are checked once at construction; the stored matrix is the
/// exactly Hermitian part of the input.
class DensityMatrix4 {
 public:
  /// Throws UnphysicalState when `m` violates the invariants.
  static DensityMatrix4 from_matrix(const Matrix4c& m);
  static DensityMatrix4 maximally_mixed();
  static DensityMatrix4 product(const Matrix2c& stokes, const Matrix2c& antistokes);

  const Matrix4c& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }
  Complex operator()(PairBasis row, PairBasis col) const { return m_(index(row), index(col)); }
  Eigen::Vector4d eigenvalues() const;

 private:
  explicit DensityMatrix4(const Matrix4c& m) : m_(m) {}
  Matrix4c m_;
};

/// Coefficients on (phi+, phi-, psi+, psi-) with phi+- = (VV +- HH)/sqrt(2),
/// psi+- = (VH +- HV)/sqrt(2).
struct BellDecomposition {
  Vector4c coefficients;

  Complex phi_plus() const { return coefficients[0]; }
  Complex phi_minus() const { return coefficients[1]; }
  Complex psi_plus() const { return coefficients[2]; }
  Complex psi_minus() const { return coefficients[3]; }
  Eigen::Vector4d weights() const { return coefficients.cwiseAbs2(); }
};

struct WeightedState {
  double weight;
  DensityMatrix4 rho;
};

TwoPhotonState tensor_product(const JonesVector& stokes, const JonesVector& antistokes);
DensityMatrix4 density_from_pure(const TwoPhotonState& psi);
/// Convex combination. Throws InvalidMixture for negative weights, an empty
/// list, or weights that do not sum to one within 1e-9.
DensityMatrix4 mix(std::span<const WeightedState> components);
/// p |target><target| + (1 - p) I/4.
DensityMatrix4 werner_state(double p, const TwoPhotonState& target = TwoPhotonState::phi_plus());

double purity(const DensityMatrix4& rho);
double fidelity_to_pure(const DensityMatrix4& rho, const TwoPhotonState& psi);
BellDecomposition bell_decomposition(const TwoPhotonState& psi);

Matrix2c single_density(const JonesVector& v);
Matrix2c unpolarized();
Matrix2c reduced_stokes(const DensityMatrix4& rho);
Matrix2c reduced_antistokes(const DensityMatrix4& rho);

}  // namespace sasbell
