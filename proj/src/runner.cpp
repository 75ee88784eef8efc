#include "sasbell/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "sasbell/rng.hpp"

namespace sasbell {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

Metadata base_metadata(const char* command, const ExperimentConfig* config, const RunOptions& options) {
  Metadata m{{"tool", "sastool"}, {"version", SASBELL_VERSION}, {"command", command}};
  if (!options.config_origin.empty()) m.emplace_back("config", options.config_origin);
  if (config) {
    m.emplace_back("config_hash", "fnv1a64:" + hex64(config->hash));
    m.emplace_back("seed", std::to_string(config->seed));
    m.emplace_back("rng", std::string(kRngIdentity));
  }
  if (options.input) m.emplace_back("input", options.input->string());
  return m;
}

void add_source_metadata(Metadata& m, const ExperimentConfig& config, const SourceModel& source) {
  if (config.target_purity) m.emplace_back("p_triple", fmt(source.rates.p_triple));
}

std::filesystem::path emit(RunOutput& out, const RunOptions& options, const std::string& name,
                           const std::string& content) {
  std::filesystem::create_directories(options.out_dir);
  const auto path = options.out_dir / name;
  write_file_atomic(path, content);
  out.files.push_back(path);
  return path;
}

std::vector<CountsRow> read_counts(const RunOptions& options) {
  return parse_counts_csv(read_text_file(*options.input));
}

const char* kBellNames[4] = {"phi_plus", "phi_minus", "psi_plus", "psi_minus"};

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::data_error:
    case ErrorKind::insufficient_data:
    case ErrorKind::incomplete_settings: return 3;
    case ErrorKind::convergence_failure: return 4;
    default: return 2;
  }
}

std::vector<CountsRow> simulate_rows(const ExperimentConfig& config, const SourceModel& source,
                                     const std::vector<MeasurementSetting>& settings) {
  std::vector<CountsRow> rows;
  const SimulationOptions sim{config.workers};
  for (std::size_t i = 0; i < settings.size(); ++i) {
    rows.push_back({settings[i], simulate_counts(source, settings[i], config.n_pulses,
                                                 derive_seed(config.seed, i + 1), sim)});
  }
  return rows;
}

ChshReport analyze_chsh(const std::vector<CountsRow>& rows) {
  static const std::array<std::string, 4> ids = {"a-b", "a-b'", "a'-b", "a'-b'"};
  std::array<const CountsRow*, 4> picked{};
  for (const auto& r : rows)
    for (std::size_t k = 0; k < 4; ++k)
      if (r.setting.id == ids[k]) {
        if (picked[k]) throw Error(ErrorKind::data_error, "setting '" + ids[k] + "' appears twice");
        picked[k] = &r;
      }
  const bool all = picked[0] && picked[1] && picked[2] && picked[3];
  if (!all) {
    if (rows.size() != 4) {
      throw Error(ErrorKind::data_error, "CHSH input needs the settings a-b, a-b', a'-b, a'-b' or exactly four rows");
    }
    for (std::size_t k = 0; k < 4; ++k) picked[k] = &rows[k];
  }
  ChshReport rep;
  for (std::size_t k = 0; k < 4; ++k) {
    if (picked[k]->counts.total() == 0) {
      throw Error(ErrorKind::insufficient_data, "setting '" + picked[k]->setting.id + "' has no coincidences");
    }
    rep.e[k] = correlation_E(picked[k]->counts);
  }
  rep.s = chsh_S(rep.e);
  return rep;
}

TomographyReport analyze_tomography(const std::vector<CountsRow>& rows, TomographyMethod method,
                                    const MleOptions& options) {
  TomographySet set;
  for (const auto& r : rows) set.push_back(record_from_counts(r.setting, r.counts));
  TomographyReport rep{DensityMatrix4::maximally_mixed()};
  if (method == TomographyMethod::linear) {
    rep.rho = tomography_linear(set).physical();
    rep.log_likelihood = log_likelihood(rep.rho, set);
  } else {
    const MleResult mle = tomography_mle(set, options);
    rep.rho = mle.rho;
    rep.log_likelihood = mle.log_likelihood;
    rep.iterations = mle.iterations;
    rep.converged = mle.converged;
  }
  rep.purity = purity(rep.rho);
  const std::array<TwoPhotonState, 4> bell = {TwoPhotonState::phi_plus(), TwoPhotonState::phi_minus(),
                                              TwoPhotonState::psi_plus(), TwoPhotonState::psi_minus()};
  for (std::size_t k = 0; k < 4; ++k) rep.bell_fidelity[k] = fidelity_to_pure(rep.rho, bell[k]);
  return rep;
}

RunOutput run_simulate(const ExperimentConfig& config, const RunOptions& options) {
  const SourceModel source = build_source(config);
  const auto rows = simulate_rows(config, source, mode_settings(config, source));
  Metadata meta = base_metadata("simulate", &config, options);
  add_source_metadata(meta, config, source);
  RunOutput out;
  emit(out, options, "counts.csv", format_counts_csv(rows, meta));
  std::uint64_t total = 0;
  for (const auto& r : rows) total += r.counts.total();
  out.summary = std::to_string(rows.size()) + " settings, " + std::to_string(total) + " coincidences";
  return out;
}

RunOutput run_chsh(const ExperimentConfig* config, const RunOptions& options) {
  RunOutput out;
  std::vector<CountsRow> rows;
  Metadata meta = base_metadata("chsh", config, options);
  if (options.input) {
    rows = read_counts(options);
  } else {
    if (!config) throw Error(ErrorKind::config_error, "chsh needs --config, --preset or --input");
    const SourceModel source = build_source(*config);
    const auto settings = resolved_chsh(*config, source).measurement_settings();
    rows = simulate_rows(*config, source, {settings.begin(), settings.end()});
    add_source_metadata(meta, *config, source);
    emit(out, options, "counts.csv", format_counts_csv(rows, meta));
  }
  const ChshReport rep = analyze_chsh(rows);
  std::string table = format_metadata(meta) + "quantity,value,std_error\n";
  static const char* names[4] = {"E(a-b)", "E(a-b')", "E(a'-b)", "E(a'-b')"};
  for (std::size_t k = 0; k < 4; ++k) table += std::string(names[k]) + ',' + fmt(rep.e[k].value) + ',' + fmt(rep.e[k].std_error) + '\n';
  table += "S," + fmt(rep.s.value) + ',' + fmt(rep.s.std_error) + '\n';
  emit(out, options, "chsh.csv", table);
  char buf[96];
  std::snprintf(buf, sizeof buf, "S = %.4f +- %.4f", rep.s.value, rep.s.std_error);
  out.summary = buf;
  return out;
}

RunOutput run_tomography(const ExperimentConfig* config, const RunOptions& options) {
  RunOutput out;
  std::vector<CountsRow> rows;
  Metadata meta = base_metadata("tomography", config, options);
  if (options.input) {
    rows = read_counts(options);
  } else {
    if (!config) throw Error(ErrorKind::config_error, "tomography needs --config, --preset or --input");
    const SourceModel source = build_source(*config);
    rows = simulate_rows(*config, source, tomography_settings(config->tomography_plan));
    add_source_metadata(meta, *config, source);
    emit(out, options, "counts.csv", format_counts_csv(rows, meta));
  }
  const TomographyMethod method = config ? config->tomography_method : TomographyMethod::mle;
  const TomographyReport rep = analyze_tomography(rows, method, config ? config->mle : MleOptions{});

  static const char* basis[4] = {"VV", "VH", "HV", "HH"};
  std::string rho = format_metadata(meta) + "part,row,VV,VH,HV,HH\n";
  for (int part = 0; part < 2; ++part)
    for (int i = 0; i < 4; ++i) {
      rho += std::string(part ? "imag" : "real") + ',' + basis[i];
      for (int j = 0; j < 4; ++j) rho += ',' + fmt(part ? rep.rho(i, j).imag() : rep.rho(i, j).real());
      rho += '\n';
    }
  emit(out, options, "rho.csv", rho);

  std::string summary = format_metadata(meta) + "quantity,value\n";
  summary += "purity," + fmt(rep.purity) + '\n';
  for (std::size_t k = 0; k < 4; ++k) summary += std::string("fidelity_") + kBellNames[k] + ',' + fmt(rep.bell_fidelity[k]) + '\n';
  summary += "min_eigenvalue," + fmt(rep.rho.eigenvalues().minCoeff()) + '\n';
  summary += "log_likelihood," + fmt(rep.log_likelihood) + '\n';
  summary += "iterations," + std::to_string(rep.iterations) + '\n';
  summary += std::string("converged,") + (rep.converged ? "1" : "0") + '\n';
  emit(out, options, "tomography.csv", summary);

  char buf[160];
  std::snprintf(buf, sizeof buf, "purity = %.4f, F(phi+) = %.4f, F(phi-) = %.4f, F(psi+) = %.4f, F(psi-) = %.4f",
                rep.purity, rep.bell_fidelity[0], rep.bell_fidelity[1], rep.bell_fidelity[2], rep.bell_fidelity[3]);
  out.summary = buf;
  if (!rep.converged) {
    out.summary += "\nmaximum likelihood did not converge in " + std::to_string(rep.iterations) +
                   " iterations; best iterate written";
    out.exit_code = exit_code_for(ErrorKind::convergence_failure);
  }
  return out;
}

RunOutput run_g2(const ExperimentConfig* config, const RunOptions& options) {
  RunOutput out;
  DelayHistogram h;
  Metadata meta = base_metadata("g2", config, options);
  if (options.input) {
    h = parse_histogram_csv(read_text_file(*options.input));
  } else {
    if (!config) throw Error(ErrorKind::config_error, "g2 needs --config, --preset or --input");
    const SourceModel source = build_source(*config);
    h = delay_histogram(source, config->n_pulses, config->g2_max_delay, derive_seed(config->seed, 0),
                        SimulationOptions{config->workers});
    add_source_metadata(meta, *config, source);
    emit(out, options, "histogram.csv", format_histogram_csv(h, meta));
  }
  const G2Estimate g2 = g2_zero(h);
  emit(out, options, "g2.csv",
       format_metadata(meta) + "quantity,value,std_error\ng2_zero," + fmt(g2.value) + ',' + fmt(g2.std_error) + '\n');
  char buf[96];
  std::snprintf(buf, sizeof buf, "g2(0) = %.4f +- %.4f", g2.value, g2.std_error);
  out.summary = buf;
  return out;
}

RunOutput run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  const bool theta_sweep = config.sweep_parameter == SweepParameter::theta;
  const auto n_points =
      static_cast<std::uint64_t>(std::floor((config.sweep_stop - config.sweep_start) / config.sweep_step + 1e-9)) + 1;

  auto brightness = [&](double theta, double shift) {
    if (config.source != PairSource::crystal) return 1.0;
    SpectralConfig sp = config.spectral;
    sp.shift_cm = shift;
    return pair_brightness(config.laser, CrystalOrientation(theta), path_amplitudes(sp, config.model));
  };
  // p_pair is quoted at the configured point; other points scale with the pair brightness
  const double reference = brightness(config.theta_deg, config.spectral.shift_cm);

  Metadata meta = base_metadata("sweep", &config, options);
  std::string csv = format_metadata(meta) + "parameter,value,setting_id,counts,n_pulses,calibrated_rate\n";
  const double seconds = static_cast<double>(config.n_pulses) * config.rates.rep_period_ns * 1e-9;
  for (std::uint64_t p = 0; p < n_points; ++p) {
    const double v = config.sweep_start + static_cast<double>(p) * config.sweep_step;
    const double theta = theta_sweep ? v : config.theta_deg;
    const double shift = theta_sweep ? config.spectral.shift_cm : v;
    ExperimentConfig point = config;
    point.rates.p_pair = config.rates.p_pair * brightness(theta, shift) / reference;
    point.seed = derive_seed(config.seed, p + 1);
    point.spectral.shift_cm = shift;
    point.theta_deg = theta;
    const SourceModel source = build_source(point);
    for (const auto& r : simulate_rows(point, source, mode_settings(point, source))) {
      const auto n = r.counts.total();
      csv += std::string(theta_sweep ? "theta_deg" : "shift_cm") + ',' + format_fixed(v, 4) + ',' + r.setting.id + ',' +
             std::to_string(n) + ',' + std::to_string(r.counts.n_pulses) + ',' +
             fmt(static_cast<double>(n) * config.sweep_calibration / seconds) + '\n';
    }
  }
  RunOutput out;
  emit(out, options, "sweep.csv", csv);
  out.summary = std::to_string(n_points) + " sweep points";
  return out;
}

}  // namespace sasbell
