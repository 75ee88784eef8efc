#include "sasbell/tomography.hpp"

#include <algorithm>
#include <cmath>

namespace sasbell {

namespace {

struct Projector {
  Matrix4c op;
  double count;
};

std::array<Matrix2c, 4> paulis() {
  Matrix2c i = Matrix2c::Identity();
  Matrix2c x, y, z;
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {i, x, y, z};
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

double record_total(const TomographyRecord& r) { return r.counts[0] + r.counts[1] + r.counts[2] + r.counts[3]; }

std::vector<Projector> flatten(std::span<const TomographyRecord> data) {
  std::vector<Projector> out;
  out.reserve(data.size() * 4);
  for (const auto& r : data) {
    for (Port s : kPorts)
      for (Port a : kPorts) {
        const double n = r.counts[static_cast<std::size_t>(outcome_index(s, a))];
        if (!(n >= 0.0) || !std::isfinite(n)) throw Error(ErrorKind::data_error, "invalid count in setting " + r.setting.id);
        out.push_back({joint_projector(r.setting, s, a), n});
      }
  }
  return out;
}

double ll_of(const Matrix4c& rho, const std::vector<Projector>& proj) {
  double ll = 0.0;
  for (const auto& p : proj) {
    if (p.count <= 0.0) continue;
    const double prob = (rho * p.op).trace().real();
    ll += p.count * std::log(std::max(prob, 1e-300));
  }
  return ll;
}

}  // namespace

WaveplateSetting tomography_plates(char label) {
  switch (label) {
    case 'V': return {0.0, 0.0};
    case 'H': return {45.0, 0.0};
    case 'D': return {22.5, 0.0};
    case 'A': return {-22.5, 0.0};
    case 'R': return {0.0, 45.0};
    case 'L': return {0.0, -45.0};
    default: throw Error(ErrorKind::config_error, std::string("unknown tomography state label '") + label + "'");
  }
}

std::vector<MeasurementSetting> tomography_settings(TomographyPlan plan) {
  const std::string labels = plan == TomographyPlan::full36 ? "VHDARL" : "VHDR";
  std::vector<MeasurementSetting> out;
  for (char s : labels)
    for (char a : labels) out.push_back({std::string{s, a}, tomography_plates(s), tomography_plates(a)});
  return out;
}

TomographyRecord record_from_counts(const MeasurementSetting& setting, const CoincidenceCounts& counts) {
  return {setting,
          {static_cast<double>(counts.n_pp), static_cast<double>(counts.n_pm), static_cast<double>(counts.n_mp),
           static_cast<double>(counts.n_mm)}};
}

TomographySet expected_tomography(const DensityMatrix4& rho, TomographyPlan plan, double counts_per_setting) {
  TomographySet out;
  for (const auto& s : tomography_settings(plan)) {
    const auto p = outcome_probabilities(rho, s);
    TomographyRecord r{s, {}};
    for (std::size_t i = 0; i < 4; ++i) r.counts[i] = counts_per_setting * p[i];
    out.push_back(r);
  }
  return out;
}

DensityMatrix4 project_to_physical(const Matrix4c& m) {
  const Matrix4c h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h / h.trace().real());
  Eigen::Vector4d lambda = es.eigenvalues();  // ascending
  // Smolin, Gambetta & Smith: zero the most negative eigenvalues while
  // spreading their weight evenly over the remaining ones.
  double carry = 0.0;
  int i = 0;
  for (; i < 4; ++i) {
    const int remaining = 4 - i;
    if (lambda[i] + carry / remaining >= 0.0) break;
    carry += lambda[i];
    lambda[i] = 0.0;
  }
  for (int j = i; j < 4; ++j) lambda[j] += carry / (4 - i);
  const Matrix4c out = es.eigenvectors() * lambda.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix4::from_matrix(out);
}

LinearReconstruction tomography_linear(std::span<const TomographyRecord> data) {
  if (data.empty()) throw Error(ErrorKind::incomplete_settings, "no tomography settings");
  const auto pauli = paulis();
  std::array<Matrix4c, 16> gamma;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) gamma[static_cast<std::size_t>(4 * k + l)] = kron(pauli[k], pauli[l]);

  const auto rows = static_cast<Eigen::Index>(data.size() * 4);
  Eigen::MatrixXd a(rows, 15);
  Eigen::VectorXd b(rows);
  Eigen::Index row = 0;
  for (const auto& r : data) {
    for (double n : r.counts)
      if (!(n >= 0.0) || !std::isfinite(n)) throw Error(ErrorKind::data_error, "invalid count in setting " + r.setting.id);
    const double total = record_total(r);
    if (!(total > 0.0)) throw Error(ErrorKind::insufficient_data, "setting " + r.setting.id + " has no counts");
    for (Port s : kPorts)
      for (Port p : kPorts) {
        const Matrix4c proj = joint_projector(r.setting, s, p);
        for (std::size_t g = 1; g < 16; ++g) a(row, static_cast<Eigen::Index>(g - 1)) = 0.25 * (proj * gamma[g]).trace().real();
        b(row) = r.counts[static_cast<std::size_t>(outcome_index(s, p))] / total - 0.25 * proj.trace().real();
        ++row;
      }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv[0] / std::max(sv[sv.size() - 1], 1e-300);
  if (sv[sv.size() - 1] < 1e-9 * sv[0]) {
    throw Error(ErrorKind::incomplete_settings, "measurement settings do not span the two-qubit operator space");
  }
  const Eigen::VectorXd r = svd.solve(b);

  Matrix4c rho = 0.25 * gamma[0];
  for (std::size_t g = 1; g < 16; ++g) rho += 0.25 * r[static_cast<Eigen::Index>(g - 1)] * gamma[g];
  rho = 0.5 * (rho + rho.adjoint());

  LinearReconstruction out;
  out.rho = rho;
  out.min_eigenvalue = check_physicality(rho).min_eigenvalue;
  out.condition_number = cond;
  return out;
}

double log_likelihood(const DensityMatrix4& rho, std::span<const TomographyRecord> data) {
  return ll_of(rho.matrix(), flatten(data));
}

MleResult tomography_mle(std::span<const TomographyRecord> data, const MleOptions& options) {
  const LinearReconstruction lin = tomography_linear(data);
  const std::vector<Projector> proj = flatten(data);
  double n_total = 0.0;
  for (const auto& p : proj) n_total += p.count;

  // start strictly inside the positive cone so every outcome has p > 0
  constexpr double kStartMixing = 1e-3;
  Matrix4c rho = (1.0 - kStartMixing) * lin.physical().matrix() + kStartMixing * Matrix4c::Identity() / 4.0;
  double ll = ll_of(rho, proj);

  MleResult out{DensityMatrix4::from_matrix(rho), ll, 0, false, {ll}};
  double eps = 1.0;
  const Matrix4c id = Matrix4c::Identity();
  for (int it = 1; it <= options.max_iter; ++it) {
    out.iterations = it;
    Matrix4c r = Matrix4c::Zero();
    for (const auto& p : proj) {
      if (p.count <= 0.0) continue;
      const double prob = std::max((rho * p.op).trace().real(), 1e-300);
      r += (p.count / prob) * p.op;
    }
    r /= n_total;

    bool accepted = false;
    while (eps > 1e-12) {
      const Matrix4c step = (id + eps * r) / (1.0 + eps);
      Matrix4c cand = step * rho * step.adjoint();
      cand /= cand.trace().real();
      cand = 0.5 * (cand + cand.adjoint());
      const double ll_new = ll_of(cand, proj);
      if (ll_new >= ll) {
        const double gain = ll_new - ll;
        rho = cand;
        ll = ll_new;
        out.log_likelihood_trace.push_back(ll);
        accepted = true;
        eps = std::min(2.0 * eps, 1e4);
        if (gain <= options.tol * std::max(1.0, std::abs(ll))) out.converged = true;
        break;
      }
      eps *= 0.5;
    }
    // no improving step at any dilution: rho is stationary
    if (!accepted) out.converged = true;
    if (out.converged) break;
  }
  out.rho = DensityMatrix4::from_matrix(rho);
  out.log_likelihood = ll;
  return out;
}

}  // namespace sasbell
