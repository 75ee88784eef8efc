#pragma once

// Reference computations for the tests, written without reusing library
// code paths: plain nested loops over std::complex and closed-form
// expressions.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "sasbell/polarization.hpp"

namespace oracle {

using C = std::complex<double>;
using M2 = std::array<std::array<C, 2>, 2>;
using M4 = std::array<std::array<C, 4>, 4>;

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline M4 to_array(const sasbell::Matrix4c& m) {
  M4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m(i, j);
  return out;
}

inline M4 kron(const M2& a, const M2& b) {
  M4 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return out;
}

inline C trace_product(const M4& a, const M4& b) {
  C t = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t += a[i][j] * b[j][i];
  return t;
}

/// |e><e| for the linear polarization cos(x) V + sin(x) H.
inline M2 linear_projector(double angle_deg) {
  const double c = std::cos(angle_deg * kDeg), s = std::sin(angle_deg * kDeg);
  return {{{c * c, c * s}, {c * s, s * s}}};
}

/// Born probability Tr[rho (P_a (x) P_b)] by brute force.
inline double joint_linear(const sasbell::Matrix4c& rho, double a_deg, double b_deg) {
  return trace_product(to_array(rho), kron(linear_projector(a_deg), linear_projector(b_deg))).real();
}

/// phi+ measured by linear analyzers at alpha, beta: both "+" ports.
inline double phi_plus_same_port(double alpha_deg, double beta_deg) {
  const double c = std::cos((alpha_deg - beta_deg) * kDeg);
  return 0.5 * c * c;
}

inline double werner_purity(double p) { return 0.75 * p * p + 0.25; }

/// Zero-delay cross-correlation for independent per-pulse Bernoulli
/// processes, unit efficiency: pair p, singles s, a (exact, no
/// approximation in the occupancies).
inline double g2_exact(double p, double s, double a) {
  const double both = p + (1.0 - p) * s * a;
  const double ms = p + s - p * s;
  const double ma = p + a - p * a;
  return both / (ms * ma);
}

inline double g2_low_rate(double p, double s, double a) { return 1.0 + p / (s * a); }

/// Maximum CHSH value over all projective measurements (Horodecki): with
/// T_ij = Tr[rho sigma_i (x) sigma_j], S_max = 2 sqrt(m1 + m2) for the two
/// largest eigenvalues of T^T T.
inline double horodecki_s_max(const sasbell::Matrix4c& rho) {
  const std::array<M2, 3> s = {M2{{{0.0, 1.0}, {1.0, 0.0}}}, M2{{{0.0, C(0.0, -1.0)}, {C(0.0, 1.0), 0.0}}},
                               M2{{{1.0, 0.0}, {0.0, -1.0}}}};
  const M4 r = to_array(rho);
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = trace_product(r, kron(s[i], s[j])).real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  const auto ev = es.eigenvalues();  // ascending
  return 2.0 * std::sqrt(ev[1] + ev[2]);
}

/// sqrt(a) |VV> + sqrt(1-a) |HH> Schmidt CHSH maximum.
inline double schmidt_s_max(double c1_abs, double c2_abs) {
  const double k = 2.0 * c1_abs * c2_abs;
  return 2.0 * std::sqrt(1.0 + k * k);
}

/// Diamond T2g tensor [[0,1],[1,0]] rotated by theta (explicit matrix product).
inline std::array<std::array<double, 2>, 2> rotated_raman(double theta_deg) {
  const double c = std::cos(theta_deg * kDeg), s = std::sin(theta_deg * kDeg);
  const double r[2][2] = {{c, -s}, {s, c}};
  const double a[2][2] = {{0, 1}, {1, 0}};
  std::array<std::array<double, 2>, 2> out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[i][j] += r[k][i] * a[k][l] * r[l][j];
  return out;
}

// Hand-rolled generators for the property tests.
struct Gen {
  std::mt19937_64 engine;
  explicit Gen(std::uint64_t seed) : engine(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }

  sasbell::Vector4c pure4() {
    sasbell::Vector4c v;
    for (int i = 0; i < 4; ++i) v[i] = C(normal(), normal());
    return v / v.norm();
  }
  sasbell::Vector2c pure2() {
    sasbell::Vector2c v(C(normal(), normal()), C(normal(), normal()));
    return v / v.norm();
  }
  /// Ginibre-distributed full-rank density matrix.
  sasbell::Matrix4c density() {
    sasbell::Matrix4c g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = C(normal(), normal());
    sasbell::Matrix4c r = g * g.adjoint();
    return r / r.trace().real();
  }
  /// Random density matrix of the given rank.
  sasbell::Matrix4c density_rank(int rank) {
    sasbell::Matrix4c r = sasbell::Matrix4c::Zero();
    for (int k = 0; k < rank; ++k) {
      const auto v = pure4();
      r += uniform(0.1, 1.0) * v * v.adjoint();
    }
    return r / r.trace().real();
  }
};

}  // namespace oracle
