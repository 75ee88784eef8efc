#include "sasbell/estimators.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "sasbell/rng.hpp"

namespace sasbell {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

WaveplateSetting stokes_arm(double angle_deg, double phase_deg) {
  if (phase_deg == 0.0) return WaveplateSetting::linear_analyzer(angle_deg);
  const double t = angle_deg * kDeg;
  return WaveplateSetting::for_state(JonesVector(std::cos(t), std::polar(std::sin(t), phase_deg * kDeg)));
}

double wrap_deg(double deg) {
  double r = std::fmod(deg, 180.0);
  if (r < 0.0) r += 180.0;
  return r;
}

struct SearchContext {
  const DensityMatrix4* rho;
  double phase_deg;
};

// sigma = P(+) - P(-) for the "+" state cos(x) V + e^{i phase} sin(x) H
Matrix2c arm_observable(double angle_deg, double phase_deg) {
  const double c = std::cos(2.0 * angle_deg * kDeg), s = std::sin(2.0 * angle_deg * kDeg);
  const Complex e = std::polar(1.0, phase_deg * kDeg);
  Matrix2c m;
  m << c, s * std::conj(e), s * e, -c;
  return m;
}

double negative_abs_s(const gsl_vector* x, void* params) {
  const auto* ctx = static_cast<const SearchContext*>(params);
  const Matrix2c a = arm_observable(gsl_vector_get(x, 0), ctx->phase_deg);
  const Matrix2c ap = arm_observable(gsl_vector_get(x, 1), ctx->phase_deg);
  const Matrix2c b = arm_observable(gsl_vector_get(x, 2), 0.0);
  const Matrix2c bp = arm_observable(gsl_vector_get(x, 3), 0.0);
  const Matrix2c d = b - bp, u = b + bp;
  const Matrix4c& r = ctx->rho->matrix();
  // Tr[rho (a (x) d + a' (x) u)] without forming the Kronecker products
  Complex s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += r(2 * j + l, 2 * i + k) * (a(i, j) * d(k, l) + ap(i, j) * u(k, l));
  return -std::abs(s.real());
}

}  // namespace

Estimate correlation_E(const CoincidenceCounts& counts) {
  const double total = static_cast<double>(counts.total());
  if (total <= 0.0) throw Error(ErrorKind::insufficient_data, "no coincidences in count table");
  const double same = static_cast<double>(counts.n_pp + counts.n_mm);
  const double e = (2.0 * same - total) / total;
  return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / total)};
}

Estimate chsh_S(const std::array<Estimate, 4>& e) {
  const double s = e[0].value - e[1].value + e[2].value + e[3].value;
  double var = 0.0;
  for (const auto& x : e) var += x.std_error * x.std_error;
  return {s, std::sqrt(var)};
}

Estimate chsh_bootstrap(const std::array<CoincidenceCounts, 4>& counts, int resamples, std::uint64_t seed) {
  if (resamples < 2) throw Error(ErrorKind::insufficient_data, "bootstrap needs at least two resamples");
  std::array<Estimate, 4> e;
  for (std::size_t k = 0; k < 4; ++k) e[k] = correlation_E(counts[k]);
  const double s0 = chsh_S(e).value;

  std::mt19937_64 engine(seed);
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < resamples; ++r) {
    std::array<Estimate, 4> eb;
    for (std::size_t k = 0; k < 4; ++k) {
      // multinomial draw as a chain of conditional binomials
      CoincidenceCounts c;
      std::uint64_t left = counts[k].total();
      double mass = 1.0;
      for (int i = 0; i < 4; ++i) {
        const double p = static_cast<double>(counts[k].at(i)) / static_cast<double>(counts[k].total());
        std::uint64_t n = left;
        if (i < 3 && left > 0) {
          const double q = mass > 0.0 ? std::min(1.0, p / mass) : 0.0;
          n = std::binomial_distribution<std::uint64_t>(left, q)(engine);
        }
        c.at(i) = n;
        left -= n;
        mass -= p;
      }
      eb[k] = correlation_E(c);
    }
    const double s = chsh_S(eb).value;
    sum += s;
    sum2 += s * s;
  }
  const double mean = sum / resamples;
  return {s0, std::sqrt(std::max(0.0, (sum2 - resamples * mean * mean) / (resamples - 1)))};
}

std::array<MeasurementSetting, 4> ChshSettings::measurement_settings() const {
  const auto sa = stokes_arm(a_deg, stokes_phase_deg);
  const auto sap = stokes_arm(a_prime_deg, stokes_phase_deg);
  const auto ab = WaveplateSetting::linear_analyzer(b_deg);
  const auto abp = WaveplateSetting::linear_analyzer(b_prime_deg);
  return {MeasurementSetting{"a-b", sa, ab}, MeasurementSetting{"a-b'", sa, abp}, MeasurementSetting{"a'-b", sap, ab},
          MeasurementSetting{"a'-b'", sap, abp}};
}

double correlation_value(const DensityMatrix4& rho, const MeasurementSetting& setting) {
  const auto p = outcome_probabilities(rho, setting);
  return p[0] - p[1] - p[2] + p[3];
}

double chsh_value(const DensityMatrix4& rho, const ChshSettings& settings) {
  const auto m = settings.measurement_settings();
  return correlation_value(rho, m[0]) - correlation_value(rho, m[1]) + correlation_value(rho, m[2]) +
         correlation_value(rho, m[3]);
}

OptimalChsh predict_optimal_S(const TwoPhotonState& psi) {
  const Complex vh = psi.amplitude(PairBasis::VH), hv = psi.amplitude(PairBasis::HV);
  if (std::abs(vh) > 1e-9 || std::abs(hv) > 1e-9) {
    throw Error(ErrorKind::degenerate_input, "closed-form CHSH prediction needs a state of the form c1|VV> + c2|HH>");
  }
  const Complex c1 = psi.amplitude(PairBasis::VV), c2 = psi.amplitude(PairBasis::HH);
  const double k = 2.0 * std::abs(c1) * std::abs(c2);
  OptimalChsh out;
  out.s_max = 2.0 * std::sqrt(1.0 + k * k);
  const double half = 0.5 * std::atan(k) / kDeg;
  out.settings = {0.0, 45.0, half, 90.0 - half, 0.0};
  if (std::abs(c1) > 0.0 && std::abs(c2) > 0.0) out.settings.stokes_phase_deg = std::arg(c2 / c1) / kDeg;
  return out;
}

OptimalChsh maximize_chsh(const DensityMatrix4& rho) {
  const Complex coh = rho(PairBasis::HH, PairBasis::VV);
  SearchContext ctx{&rho, std::abs(coh) > 1e-12 ? std::arg(coh) / kDeg : 0.0};

  gsl_set_error_handler_off();
  gsl_multimin_function fn{&negative_abs_s, 4, &ctx};
  const gsl_multimin_fminimizer_type* type = gsl_multimin_fminimizer_nmsimplex2;
  gsl_multimin_fminimizer* solver = gsl_multimin_fminimizer_alloc(type, 4);
  gsl_vector* x = gsl_vector_alloc(4);
  gsl_vector* step = gsl_vector_alloc(4);

  std::vector<std::array<double, 4>> starts = {{0.0, 45.0, 22.5, 67.5}, {0.0, 45.0, 67.5, 22.5}};
  PulseRng rng(0x5eedc45dULL);
  for (int i = 0; i < 14; ++i) starts.push_back({180.0 * rng.uniform(), 180.0 * rng.uniform(),
                                                 180.0 * rng.uniform(), 180.0 * rng.uniform()});

  auto run = [&](const std::array<double, 4>& from, double step_deg) {
    for (std::size_t i = 0; i < 4; ++i) gsl_vector_set(x, i, from[i]);
    gsl_vector_set_all(step, step_deg);
    gsl_multimin_fminimizer_set(solver, &fn, x, step);
    for (int it = 0; it < 4000; ++it) {
      if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), 1e-9) == GSL_SUCCESS) break;
    }
    return std::array<double, 4>{gsl_vector_get(solver->x, 0), gsl_vector_get(solver->x, 1),
                                 gsl_vector_get(solver->x, 2), gsl_vector_get(solver->x, 3)};
  };

  OptimalChsh best;
  best.s_max = -1.0;
  for (const auto& start : starts) {
    // coarse search, then a restart from the optimum with a small simplex
    const auto polished = run(run(start, 15.0), 0.5);
    const double val = -solver->fval;
    if (val > best.s_max) {
      best.s_max = val;
      best.settings = {polished[0], polished[1], polished[2], polished[3], ctx.phase_deg};
    }
  }
  gsl_vector_free(step);
  gsl_vector_free(x);
  gsl_multimin_fminimizer_free(solver);

  // rotating both anti-Stokes analyzers by 90 deg flips the sign of S
  if (chsh_value(rho, best.settings) < 0.0) {
    best.settings.b_deg += 90.0;
    best.settings.b_prime_deg += 90.0;
  }
  best.settings.a_deg = wrap_deg(best.settings.a_deg);
  best.settings.a_prime_deg = wrap_deg(best.settings.a_prime_deg);
  best.settings.b_deg = wrap_deg(best.settings.b_deg);
  best.settings.b_prime_deg = wrap_deg(best.settings.b_prime_deg);
  best.s_max = chsh_value(rho, best.settings);
  return best;
}

}  // namespace sasbell
