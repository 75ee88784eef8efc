// Acceptance scenarios: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sasbell/crystal.hpp"
#include "sasbell/rng.hpp"
#include "sasbell/runner.hpp"

using namespace sasbell;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ChshReport simulate_chsh(const ExperimentConfig& c, const SourceModel& src, const ChshSettings& st) {
  const auto m = st.measurement_settings();
  return analyze_chsh(simulate_rows(c, src, {m.begin(), m.end()}));
}

const TwoPhotonState kAnchor = TwoPhotonState::schmidt(std::sqrt(0.72), std::sqrt(0.28));

void optimal_prediction(Outcome& o) {
  const auto t0 = Clock::now();
  const auto r = predict_optimal_S(kAnchor);
  const double dt = seconds_since(t0);
  o.detail << "S=" << r.s_max << " b=" << r.settings.b_deg << " b'=" << r.settings.b_prime_deg << " t=" << dt << "s";
  o.require(std::abs(r.s_max - 2.688) <= 0.005, "S within 2.688 +- 0.005");
  o.require(std::abs(r.s_max - oracle::schmidt_s_max(std::sqrt(0.72), std::sqrt(0.28))) < 1e-12, "closed form");
  o.require(dt < 1.0, "runtime");
}

void bell_weights(Outcome& o) {
  const auto t0 = Clock::now();
  const auto w = bell_decomposition(kAnchor).weights();
  const double dt = seconds_since(t0);
  o.detail << "phi+=" << w[0] << " phi-=" << w[1] << " psi=" << w[2] + w[3];
  o.require(std::abs(w[0] - 0.95) <= 0.005, "phi+ weight");
  o.require(std::abs(w[1] - 0.05) <= 0.005, "phi- weight");
  o.require(w[2] + w[3] < 1e-12, "no psi component");
  o.require(dt < 1.0, "runtime");
}

void table_900_theta0(Outcome& o) {
  const auto t0 = Clock::now();
  const auto c = load_preset("table1-900-theta0");
  const auto src = build_source(c);
  const auto rep = simulate_chsh(c, src, resolved_chsh(c, src));
  const double dt = seconds_since(t0);
  o.detail << "S=" << rep.s.value << "+-" << rep.s.std_error << " pulses/setting=" << c.n_pulses << " t=" << dt << "s";
  o.require(c.n_pulses >= 1000000, "at least 1e6 pulses");
  o.require(rep.s.value >= 2.5 && rep.s.value <= 2.8, "S in [2.5, 2.8]");
  o.require(dt < 60.0, "runtime");
}

void table_theta45(Outcome& o) {
  const auto c = load_preset("table1-900-theta45");
  const auto src = build_source(c);
  const auto psi = generate_sas_state(c.laser, CrystalOrientation(c.theta_deg),
                                      path_amplitudes(c.spectral, calibrate(c.model, c.spectral)));
  o.require(psi.probabilities()[0] > 1.0 - 1e-12, "source is |VV>");
  const auto canon = simulate_chsh(c, src, ChshSettings::canonical());
  o.detail << "canonical S=" << canon.s.value << "+-" << canon.s.std_error;
  o.require(std::abs(canon.s.value - std::sqrt(2.0)) <= 0.05, "canonical S ~ sqrt(2)");

  oracle::Gen gen(404);
  std::vector<ChshSettings> trial{maximize_chsh(effective_coincidence_state(src).rho).settings};
  for (int i = 0; i < 8; ++i)
    trial.push_back({gen.uniform(0, 180), gen.uniform(0, 180), gen.uniform(0, 180), gen.uniform(0, 180), 0.0});
  double worst = -1e9;
  auto cc = c;
  for (std::size_t i = 0; i < trial.size(); ++i) {
    cc.seed = c.seed + 100 + i;
    const auto r = simulate_chsh(cc, src, trial[i]);
    worst = std::max(worst, std::abs(r.s.value) - 3.0 * r.s.std_error);
  }
  o.detail << " max(|S|-3sd) over " << trial.size() << " angle sets=" << worst;
  o.require(worst <= 2.0, "|S| <= 2 + 3 sd at every angle set");
}

void resonance(Outcome& o) {
  const auto c = load_preset("table1-1332-theta0");
  const auto src = build_source(c);
  const auto eff = effective_coincidence_state(src);
  const auto rep = simulate_chsh(c, src, resolved_chsh(c, src));
  o.detail << "p_triple=" << src.rates.p_triple << " purity=" << purity(eff.rho) << " S=" << rep.s.value << "+-"
           << rep.s.std_error;
  o.require(std::abs(purity(eff.rho) - 0.65) <= 0.03, "purity 0.65 +- 0.03");
  o.require(rep.s.value >= 1.9 && rep.s.value <= 2.2, "S in [1.9, 2.2]");

  // background sweep: each level re-optimizes the analyzers on its own state
  double prev = 1e9;
  o.detail << " sweep:";
  int k = 0;
  for (double pt : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    auto s = src;
    s.rates.p_triple = pt;
    auto cc = c;
    cc.seed = c.seed + 1000 + static_cast<std::uint64_t>(k++);
    const auto r = simulate_chsh(cc, s, maximize_chsh(effective_coincidence_state(s).rho).settings);
    o.detail << " " << r.s.value;
    o.require(r.s.value < prev, "S decreases with background");
    prev = r.s.value;
  }
}

void fig3(Outcome& o) {
  auto counts = [](const char* preset) {
    const auto c = load_preset(preset);
    const auto src = build_source(c);
    std::array<double, 4> n{};  // VV, VH, HV, HH "++" counts
    const char* ids[] = {"VV", "VH", "HV", "HH"};
    for (const auto& row : simulate_rows(c, src, mode_settings(c, src)))
      for (int i = 0; i < 4; ++i)
        if (row.setting.id == ids[i]) n[static_cast<std::size_t>(i)] = static_cast<double>(row.counts.n_pp);
    return n;
  };
  const auto a = counts("fig3a");
  const auto d = counts("fig3d");
  const double ratio0 = a[3] / (a[0] + a[3]);
  o.detail << "theta0 VV=" << a[0] << " HH=" << a[3] << " cross=" << a[1] + a[2] << " HH share=" << ratio0
           << "; theta45 VV=" << d[0] << " HH=" << d[3] << " cross=" << d[1] + d[2];
  o.require(a[1] + a[2] < 0.05 * (a[0] + a[3]), "theta0 cross < 5%");
  o.require(d[1] + d[2] < 0.05 * (d[0] + d[3]), "theta45 cross < 5%");
  o.require(std::abs(ratio0 - 0.28) <= 0.02, "theta0 HH/(HH+VV) = 0.28 +- 0.02");
  o.require(d[3] < 0.05 * d[0], "theta45 HH < 5% of VV");
}

void g2(Outcome& o) {
  auto run = [](const char* preset) {
    const auto c = load_preset(preset);
    return g2_zero(delay_histogram(build_source(c), c.n_pulses, c.g2_max_delay, c.seed, {c.workers}));
  };
  const auto singles = run("g2-singles");
  const auto cal = run("g2-calibration");
  const auto dom = run("g2-pair-dominant");
  const auto cc = load_preset("g2-calibration");
  const double oracle_low = oracle::g2_low_rate(cc.rates.p_pair, cc.rates.p_s_single, cc.rates.p_as_single);
  o.detail << "singles=" << singles.value << "+-" << singles.std_error << " calibration=" << cal.value << "+-"
           << cal.std_error << " (oracle " << oracle_low << ") pair-dominant=" << dom.value << "+-" << dom.std_error;
  o.require(std::abs(singles.value - 1.0) <= 0.1, "singles g2 = 1 +- 0.1");
  o.require(cc.rates.p_pair == 1e-4 && cc.rates.p_s_single == 1e-2 && cc.rates.p_as_single == 1e-2, "calibration rates");
  o.require(std::abs(cal.value - 2.0) <= 0.1, "pair g2 = 2 +- 0.1");
  o.require(std::abs(cal.value - oracle_low) <= 0.1, "matches 1 + p/(s a)");
  o.require(dom.value - 3.0 * dom.std_error > 2.0, "pair-dominant above 2 at 3 sd");
}

TomographySet simulated_tomography(const DensityMatrix4& rho, std::uint64_t pulses, std::uint64_t seed) {
  SourceRates r;
  r.p_pair = 1.0;
  const SourceModel model{rho, r};
  TomographySet out;
  std::uint64_t k = 0;
  for (const auto& s : tomography_settings(TomographyPlan::full36))
    out.push_back(record_from_counts(s, simulate_counts(model, s, pulses, derive_seed(seed, ++k))));
  return out;
}

void tomography(Outcome& o) {
  oracle::Gen gen(808);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto rho = DensityMatrix4::from_matrix(gen.density());
    const auto rec = tomography_linear(expected_tomography(rho, TomographyPlan::full36));
    worst = std::max(worst, (rec.rho - rho.matrix()).cwiseAbs().maxCoeff());
  }
  o.detail << "linear max error=" << worst;
  o.require(worst <= 1e-10, "noiseless linear inversion to 1e-10");

  const auto phi = tomography_mle(simulated_tomography(density_from_pure(TwoPhotonState::phi_plus()), 100000, 21));
  const double f = fidelity_to_pure(phi.rho, TwoPhotonState::phi_plus());
  o.detail << " phi+ MLE fidelity=" << f;
  o.require(f >= 0.99, "phi+ fidelity >= 0.99");

  const double truth = oracle::werner_purity(0.73);
  const auto w = tomography_mle(simulated_tomography(werner_state(0.73), 100000, 22));
  o.detail << " Werner purity=" << purity(w.rho) << " (truth " << truth << ")";
  o.require(std::abs(purity(w.rho) - truth) <= 0.03, "Werner purity within 0.03");
}

void properties(Outcome& o) {
  oracle::Gen gen(909);
  int mix_bad = 0, complete_bad = 0, born_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const double w = gen.uniform(0, 1);
    const auto a = DensityMatrix4::from_matrix(gen.density_rank(1 + t % 4));
    const auto b = DensityMatrix4::from_matrix(gen.density_rank(1 + (t + 1) % 4));
    const WeightedState parts[] = {{w, a}, {1 - w, b}};
    if (!check_physicality(mix(parts).matrix()).physical()) ++mix_bad;
    const MeasurementSetting m{"x", {gen.uniform(0, 180), gen.uniform(0, 180)}, {gen.uniform(0, 180), gen.uniform(0, 180)}};
    const auto p = outcome_probabilities(a, m);
    if (std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) > 1e-12) ++complete_bad;
  }
  o.require(mix_bad == 0, "random mixtures physical");
  o.require(complete_bad == 0, "outcome probabilities sum to 1");

  const auto t0 = raman_tensor_lab(CrystalOrientation(0.0));
  const auto t45 = raman_tensor_lab(CrystalOrientation(45.0));
  o.require((t0 - (Eigen::Matrix2d() << 0, 1, 1, 0).finished()).norm() < 1e-14, "theta 0 tensor");
  o.require((t45 - (Eigen::Matrix2d() << 1, 0, 0, -1).finished()).norm() < 1e-14, "theta 45 tensor");
  PathAmplitudes amps(Complex(1.0, 0.2), Complex(0.4, -0.3));
  double period = 0.0;
  for (double th = 0; th < 180; th += 7.0) {
    const auto p0 = generate_sas_state(JonesVector::vertical(), CrystalOrientation(th), amps).probabilities();
    const auto p1 = generate_sas_state(JonesVector::vertical(), CrystalOrientation(th + 90), amps).probabilities();
    period = std::max(period, (p0 - p1).cwiseAbs().maxCoeff());
  }
  o.require(period < 1e-12, "90 deg intensity periodicity");

  SourceRates r;
  r.p_pair = 1.0;
  for (int t = 0; t < 5; ++t) {
    const auto rho = DensityMatrix4::from_matrix(gen.density());
    const MeasurementSetting m{"x", {gen.uniform(0, 180), gen.uniform(0, 180)}, {gen.uniform(0, 180), gen.uniform(0, 180)}};
    const auto c = simulate_counts({rho, r}, m, 1000000, 50 + t);
    const auto p = outcome_probabilities(rho, m);
    for (int i = 0; i < 4; ++i) {
      const double pi = p[static_cast<std::size_t>(i)];
      if (std::abs(static_cast<double>(c.at(i)) - 1e6 * pi) > 4.0 * std::sqrt(1e6 * pi * (1 - pi))) ++born_bad;
    }
  }
  o.require(born_bad == 0, "Monte Carlo within 4 sd of Born rule");

  SourceRates noisy;
  noisy.p_pair = 0.05;
  noisy.p_s_single = 0.05;
  noisy.p_as_single = 0.05;
  noisy.p_triple = 0.3;
  noisy.eta_s = noisy.eta_as = 0.5;
  noisy.dark_s = noisy.dark_as = 1e-3;
  const SourceModel model{werner_state(0.7), noisy};
  const auto m = label_setting("DR");
  const auto c1 = simulate_counts(model, m, 300000, 5, {1});
  const auto c2 = simulate_counts(model, m, 300000, 5, {7});
  const auto h1 = delay_histogram(model, 300000, 4, 5, {1});
  const auto h2 = delay_histogram(model, 300000, 4, 5, {5});
  o.require(c1 == c2 && h1 == h2, "bit-exact determinism across worker counts");
  o.detail << "mix_bad=" << mix_bad << " completeness_bad=" << complete_bad << " born_bad=" << born_bad
           << " periodicity_err=" << period;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"optimal CHSH prediction", optimal_prediction},
      {"Bell decomposition", bell_weights},
      {"900 cm-1 theta 0 end-to-end CHSH", table_900_theta0},
      {"theta 45 separable source", table_theta45},
      {"resonance degradation", resonance},
      {"co/cross-polarized pattern", fig3},
      {"g2 behavior", g2},
      {"tomography correctness", tomography},
      {"property suites", properties},
  };
  int failures = 0, n = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", ++n, name, o.detail.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
