#include <cmath>
#include <vector>

#include "sasbell/simulation.hpp"

namespace sasbell {

namespace {

// A click source in one arm. The pair photons are tagged so that a
// (pair-S, pair-aS) combination keeps the pair's correlations.
struct Source {
  bool from_pair = false;
  Matrix2c state = unpolarized();
};

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

struct Branch {
  double probability;
  std::vector<Source> sources;
};

// Detector dark counts in one arm: 0, 1 or 2 firing detectors. A dark click
// on either port averages to the unpolarized state once both ports are summed.
std::vector<Branch> dark_branches(double d) {
  return {{(1.0 - d) * (1.0 - d), {}},
          {2.0 * d * (1.0 - d), {Source{}}},
          {d * d, {Source{}, Source{}}}};
}

}  // namespace

EffectiveState effective_coincidence_state(const SourceModel& model) {
  const SourceRates& r = model.rates;
  r.validate();
  const Matrix2c pair_s = reduced_stokes(model.pair);
  const Matrix2c pair_as = reduced_antistokes(model.pair);

  Matrix4c acc = Matrix4c::Zero();
  double total = 0.0;
  double clean = 0.0;

  const auto dark_s = dark_branches(r.dark_s);
  const auto dark_as = dark_branches(r.dark_as);

  for (int pair = 0; pair < 2; ++pair) {
    const double p_pair = pair ? r.p_pair : 1.0 - r.p_pair;
    if (p_pair <= 0.0) continue;
    for (int s_det = 0; s_det <= pair; ++s_det)
      for (int a_det = 0; a_det <= pair; ++a_det)
        for (int extra = 0; extra <= pair; ++extra) {
          double w_pair = p_pair;
          if (pair) {
            w_pair *= s_det ? r.eta_s : 1.0 - r.eta_s;
            w_pair *= a_det ? r.eta_as : 1.0 - r.eta_as;
            w_pair *= extra ? r.p_triple * r.eta_s : 1.0 - r.p_triple * r.eta_s;
          }
          if (w_pair <= 0.0) continue;
          for (int ss = 0; ss < 2; ++ss)
            for (int as = 0; as < 2; ++as) {
              const double ps = r.p_s_single * r.eta_s;
              const double pa = r.p_as_single * r.eta_as;
              const double w_single = (ss ? ps : 1.0 - ps) * (as ? pa : 1.0 - pa);
              if (w_single <= 0.0) continue;
              for (const auto& ds : dark_s)
                for (const auto& da : dark_as) {
                  const double w = w_pair * w_single * ds.probability * da.probability;
                  if (w <= 0.0) continue;
                  std::vector<Source> s_src = ds.sources;
                  std::vector<Source> a_src = da.sources;
                  if (s_det) s_src.push_back({true, pair_s});
                  if (extra) s_src.push_back({false, model.stokes_single});
                  if (ss) s_src.push_back({false, model.stokes_single});
                  if (a_det) a_src.push_back({true, pair_as});
                  if (as) a_src.push_back({false, model.antistokes_single});
                  if (s_src.empty() || a_src.empty()) continue;

                  Matrix4c state = Matrix4c::Zero();
                  for (const auto& x : s_src)
                    for (const auto& y : a_src)
                      state += (x.from_pair && y.from_pair) ? model.pair.matrix() : kron(x.state, y.state);
                  state /= static_cast<double>(s_src.size() * a_src.size());
                  acc += w * state;
                  total += w;
                  if (s_src.size() == 1 && a_src.size() == 1 && s_det && a_det) clean += w;
                }
            }
        }
  }
  if (!(total > 0.0)) throw Error(ErrorKind::insufficient_data, "source model produces no coincidences");
  return {DensityMatrix4::from_matrix(acc / total), total, clean / total};
}

double tune_triple_probability(const SourceModel& model, double target_purity) {
  auto purity_at = [&](double p_triple) {
    SourceModel m = model;
    m.rates.p_triple = p_triple;
    return purity(effective_coincidence_state(m).rho);
  };
  double lo = 0.0, hi = 1.0;
  double f_lo = purity_at(lo) - target_purity;
  const double f_hi = purity_at(hi) - target_purity;
  if (f_lo < 0.0 || f_hi > 0.0) {
    throw Error(ErrorKind::config_error, "target purity " + std::to_string(target_purity) +
                                             " is outside the range reachable by the three-photon background");
  }
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = purity_at(mid) - target_purity;
    if ((f > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace sasbell
