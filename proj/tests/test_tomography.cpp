#include <doctest.h>

#include "oracles.hpp"
#include "sasbell/rng.hpp"
#include "sasbell/simulation.hpp"
#include "sasbell/tomography.hpp"

using namespace sasbell;

namespace {

bool throws_kind(ErrorKind kind, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

// Simulated tomography data with unit-efficiency, background-free detection.
TomographySet simulated(const DensityMatrix4& rho, std::uint64_t pulses, std::uint64_t seed) {
  SourceRates r;
  r.p_pair = 1.0;
  const SourceModel model{rho, r};
  TomographySet out;
  std::uint64_t k = 0;
  for (const auto& s : tomography_settings(TomographyPlan::full36))
    out.push_back(record_from_counts(s, simulate_counts(model, s, pulses, derive_seed(seed, ++k), {1})));
  return out;
}

}  // namespace

TEST_SUITE("tomography") {
  TEST_CASE("setting plans") {
    const auto full = tomography_settings(TomographyPlan::full36);
    CHECK(full.size() == 36);
    CHECK(full.front().id == "VV");
    CHECK(full[2].id == "VD");
    CHECK(full.back().id == "LL");
    CHECK(tomography_settings(TomographyPlan::reduced16).size() == 16);
    CHECK(throws_kind(ErrorKind::config_error, [] { tomography_plates('X'); }));
  }

  TEST_CASE("noiseless linear inversion is exact") {
    for (const auto& rho : {density_from_pure(TwoPhotonState::phi_plus()), DensityMatrix4::maximally_mixed()}) {
      const auto rec = tomography_linear(expected_tomography(rho, TomographyPlan::full36, 1000.0));
      CHECK(max_abs(rec.rho - rho.matrix()) < 1e-10);
    }
    oracle::Gen gen(61);
    for (int t = 0; t < 100; ++t) {
      const auto rho = DensityMatrix4::from_matrix(t % 2 ? gen.density() : gen.density_rank(1 + t % 4));
      const auto plan = t % 3 ? TomographyPlan::full36 : TomographyPlan::reduced16;
      const auto rec = tomography_linear(expected_tomography(rho, plan, 1.0));
      CHECK(max_abs(rec.rho - rho.matrix()) < 1e-10);
      CHECK(rec.condition_number >= 1.0);
    }
  }

  TEST_CASE("linear inversion input errors") {
    const auto rho = werner_state(0.5);
    auto data = expected_tomography(rho, TomographyPlan::reduced16, 100.0);
    // only V/H analyzers: populations but no coherences
    TomographySet vh;
    for (const auto& r : data)
      if ((r.setting.id[0] == 'V' || r.setting.id[0] == 'H') && (r.setting.id[1] == 'V' || r.setting.id[1] == 'H'))
        vh.push_back(r);
    CHECK(throws_kind(ErrorKind::incomplete_settings, [&] { tomography_linear(vh); }));
    CHECK(throws_kind(ErrorKind::incomplete_settings, [] { tomography_linear(TomographySet{}); }));
    data[3].counts = {0, 0, 0, 0};
    CHECK(throws_kind(ErrorKind::insufficient_data, [&] { tomography_linear(data); }));
    data[3].counts = {2, -1, 0, 0};
    CHECK(throws_kind(ErrorKind::data_error, [&] { tomography_linear(data); }));
  }

  TEST_CASE("projection onto physical states") {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.2;
    m(3, 3) = -0.2;
    const auto p = project_to_physical(m);
    CHECK(p.eigenvalues().minCoeff() >= -1e-12);
    CHECK(std::abs(p.matrix().trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(p(0, 0).real() - 1.0) < 1e-12);
    const auto w = werner_state(0.6);
    CHECK(max_abs(project_to_physical(w.matrix()).matrix() - w.matrix()) < 1e-12);
  }

  TEST_CASE("noiseless MLE") {
    const auto phi = density_from_pure(TwoPhotonState::phi_plus());
    const auto mle = tomography_mle(expected_tomography(phi, TomographyPlan::full36, 1e5));
    CHECK(mle.converged);
    CHECK(fidelity_to_pure(mle.rho, TwoPhotonState::phi_plus()) >= 1.0 - 1e-8);

    oracle::Gen gen(62);
    for (int t = 0; t < 10; ++t) {
      const auto rho = DensityMatrix4::from_matrix(gen.density());
      const auto r = tomography_mle(expected_tomography(rho, TomographyPlan::full36, 1e4), {1e-13, 20000});
      CHECK(max_abs(r.rho.matrix() - rho.matrix()) < 1e-4);
    }
  }

  TEST_CASE("MLE on sampled data") {
    const auto phi = density_from_pure(TwoPhotonState::phi_plus());
    const auto data = simulated(phi, 100000, 3);
    const auto mle = tomography_mle(data);
    CHECK(fidelity_to_pure(mle.rho, TwoPhotonState::phi_plus()) >= 0.99);
    CHECK(mle.rho.eigenvalues().minCoeff() >= -1e-12);
    for (std::size_t i = 1; i < mle.log_likelihood_trace.size(); ++i)
      CHECK(mle.log_likelihood_trace[i] >= mle.log_likelihood_trace[i - 1] - 1e-9 * std::abs(mle.log_likelihood_trace[i]));
    CHECK(std::abs(mle.log_likelihood - log_likelihood(mle.rho, data)) < 1e-9 * std::abs(mle.log_likelihood));
    // the MLE is at least as likely as the projected linear estimate
    CHECK(mle.log_likelihood >= log_likelihood(tomography_linear(data).physical(), data) - 1e-9);

    const double target = oracle::werner_purity(0.73);
    CHECK(std::abs(target - 0.649675) < 1e-9);
    const auto w = tomography_mle(simulated(werner_state(0.73), 100000, 4));
    CHECK(std::abs(purity(w.rho) - target) <= 0.03);
    CHECK(w.rho.eigenvalues().minCoeff() >= -1e-12);
  }

  TEST_CASE("MLE recovers the post-selected resonance state") {
    SourceRates r;
    r.p_pair = 0.01;
    r.p_triple = 0.5;
    r.eta_s = r.eta_as = 0.5;
    const auto pair = density_from_pure(TwoPhotonState::schmidt(std::sqrt(0.48), std::polar(std::sqrt(0.52), 0.9)));
    const SourceModel model{pair, r, single_density(JonesVector::horizontal()), unpolarized()};
    const auto eff = effective_coincidence_state(model);
    TomographySet data;
    std::uint64_t k = 0;
    for (const auto& s : tomography_settings(TomographyPlan::full36))
      data.push_back(record_from_counts(s, simulate_counts(model, s, 4000000, derive_seed(9, ++k))));
    const auto mle = tomography_mle(data);
    CHECK(std::abs(purity(mle.rho) - purity(eff.rho)) <= 0.03);
  }

  TEST_CASE("iteration cap reports non-convergence") {
    const auto data = simulated(werner_state(0.73), 20000, 5);
    MleOptions opt;
    opt.max_iter = 1;
    opt.tol = 0.0;
    const auto r = tomography_mle(data, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
    CHECK(check_physicality(r.rho.matrix()).physical());
  }
}
