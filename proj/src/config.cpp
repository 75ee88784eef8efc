#include "sasbell/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sasbell {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  return x;
}

std::uint64_t to_count(const std::string& v) {
  std::uint64_t n = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec == std::errc{} && ptr == v.data() + v.size()) return n;
  // allow 4e6 style
  const double x = to_double(v);
  if (x < 0.0 || x != std::floor(x) || x > 9007199254740992.0) {
    throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::uint64_t>(x);
}

template <typename E>
E to_enum(const std::string& v, std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [name, value] : options) {
    if (v == name) return value;
    names += names.empty() ? name : std::string("|") + name;
  }
  throw std::invalid_argument("expected one of " + names + ", got '" + v + "'");
}

bool is_state_label(char c) { return std::string_view("VHDARL").find(c) != std::string_view::npos; }

JonesVector label_state(char c) {
  switch (c) {
    case 'V': return JonesVector::vertical();
    case 'H': return JonesVector::horizontal();
    case 'D': return JonesVector::diagonal();
    case 'A': return JonesVector::antidiagonal();
    case 'R': return JonesVector::right_circular();
    case 'L': return JonesVector::left_circular();
    default: throw Error(ErrorKind::config_error, std::string("unknown polarization label '") + c + "'");
  }
}

std::string check_polarization(const std::string& v) {
  if (v == "raman" || v == "unpolarized" || (v.size() == 1 && is_state_label(v[0]))) return v;
  throw std::invalid_argument("expected raman, unpolarized or one of V,H,D,A,R,L, got '" + v + "'");
}

Matrix2c single_polarization(const std::string& v, const JonesVector& laser, const CrystalOrientation& theta) {
  if (v == "raman") return raman_single_state(laser, theta);
  if (v == "unpolarized") return unpolarized();
  return single_density(label_state(v[0]));
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct Parsed {
  std::set<std::string> chsh_angle_keys;
  bool chsh_mode_given = false;
};

std::map<std::string, Setter> make_setters(Parsed& parsed) {
  std::map<std::string, Setter> s;
  auto num = [&s](const std::string& key, auto field) {
    s[key] = [field](ExperimentConfig& c, const std::string& v) { field(c) = to_double(v); };
  };
  num("theta_deg", [](ExperimentConfig& c) -> double& { return c.theta_deg; });
  s["laser.polarization"] = [](ExperimentConfig& c, const std::string& v) {
    if (v.size() == 1 && is_state_label(v[0]))
      c.laser = label_state(v[0]);
    else
      c.laser = JonesVector::linear(to_double(v));
  };
  num("spectral.shift_cm", [](ExperimentConfig& c) -> double& { return c.spectral.shift_cm; });
  s["spectral.laser_nm"] = [](ExperimentConfig& c, const std::string& v) {
    const double nm = to_double(v);
    if (!(nm > 0.0)) throw std::invalid_argument("laser wavelength must be positive");
    c.spectral.omega_laser_cm = 1.0e7 / nm;
  };
  num("spectral.omega_phonon_cm", [](ExperimentConfig& c) -> double& { return c.spectral.omega_phonon_cm; });
  num("spectral.gamma_phonon_cm", [](ExperimentConfig& c) -> double& { return c.spectral.gamma_phonon_cm; });

  num("model.g_e", [](ExperimentConfig& c) -> double& { return c.model.g_e; });
  s["model.g_r"] = [](ExperimentConfig& c, const std::string& v) {
    if (v == "auto")
      c.model.g_r.reset();
    else
      c.model.g_r = to_double(v);
  };
  num("model.decay_width_cm", [](ExperimentConfig& c) -> double& { return c.model.decay_width_cm; });
  num("model.relative_phase_deg", [](ExperimentConfig& c) -> double& { return c.model.relative_phase_deg; });
  num("model.anchor_shift_cm", [](ExperimentConfig& c) -> double& { return c.model.anchor_shift_cm; });
  num("model.anchor_ratio", [](ExperimentConfig& c) -> double& { return c.model.anchor_ratio; });

  s["source.state"] = [](ExperimentConfig& c, const std::string& v) {
    c.source = to_enum<PairSource>(v, {{"crystal", PairSource::crystal}, {"werner", PairSource::werner}});
  };
  num("source.werner_p", [](ExperimentConfig& c) -> double& { return c.werner_p; });

  num("rates.p_pair", [](ExperimentConfig& c) -> double& { return c.rates.p_pair; });
  num("rates.p_s_single", [](ExperimentConfig& c) -> double& { return c.rates.p_s_single; });
  num("rates.p_as_single", [](ExperimentConfig& c) -> double& { return c.rates.p_as_single; });
  num("rates.p_triple", [](ExperimentConfig& c) -> double& { return c.rates.p_triple; });
  num("rates.eta_s", [](ExperimentConfig& c) -> double& { return c.rates.eta_s; });
  num("rates.eta_as", [](ExperimentConfig& c) -> double& { return c.rates.eta_as; });
  num("rates.dark_s", [](ExperimentConfig& c) -> double& { return c.rates.dark_s; });
  num("rates.dark_as", [](ExperimentConfig& c) -> double& { return c.rates.dark_as; });
  num("rates.rep_period_ns", [](ExperimentConfig& c) -> double& { return c.rates.rep_period_ns; });

  s["singles.stokes_polarization"] = [](ExperimentConfig& c, const std::string& v) {
    c.singles.stokes = check_polarization(v);
  };
  s["singles.antistokes_polarization"] = [](ExperimentConfig& c, const std::string& v) {
    c.singles.antistokes = check_polarization(v);
  };
  s["background.target_purity"] = [](ExperimentConfig& c, const std::string& v) { c.target_purity = to_double(v); };

  s["mode"] = [](ExperimentConfig& c, const std::string& v) {
    c.mode = to_enum<RunMode>(
        v, {{"basis", RunMode::basis}, {"chsh", RunMode::chsh}, {"tomography", RunMode::tomography}});
  };
  s["analyzer.settings"] = [](ExperimentConfig& c, const std::string& v) {
    c.analyzer_settings.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.size() != 2 || !is_state_label(item[0]) || !is_state_label(item[1])) {
        throw std::invalid_argument("setting '" + item + "' is not two of V,H,D,A,R,L");
      }
      c.analyzer_settings.push_back(item);
    }
    if (c.analyzer_settings.empty()) throw std::invalid_argument("empty settings list");
  };

  s["chsh.angles"] = [&parsed](ExperimentConfig& c, const std::string& v) {
    parsed.chsh_mode_given = true;
    c.chsh_angles = to_enum<ChshAngles>(
        v, {{"canonical", ChshAngles::canonical}, {"optimal", ChshAngles::optimal}, {"custom", ChshAngles::custom}});
  };
  auto angle = [&s, &parsed](const std::string& key, auto field) {
    s[key] = [field, key, &parsed](ExperimentConfig& c, const std::string& v) {
      parsed.chsh_angle_keys.insert(key);
      field(c) = to_double(v);
    };
  };
  angle("chsh.a_deg", [](ExperimentConfig& c) -> double& { return c.chsh.a_deg; });
  angle("chsh.a_prime_deg", [](ExperimentConfig& c) -> double& { return c.chsh.a_prime_deg; });
  angle("chsh.b_deg", [](ExperimentConfig& c) -> double& { return c.chsh.b_deg; });
  angle("chsh.b_prime_deg", [](ExperimentConfig& c) -> double& { return c.chsh.b_prime_deg; });
  angle("chsh.stokes_phase_deg", [](ExperimentConfig& c) -> double& { return c.chsh.stokes_phase_deg; });

  s["tomography.plan"] = [](ExperimentConfig& c, const std::string& v) {
    c.tomography_plan =
        to_enum<TomographyPlan>(v, {{"full36", TomographyPlan::full36}, {"reduced16", TomographyPlan::reduced16}});
  };
  s["tomography.method"] = [](ExperimentConfig& c, const std::string& v) {
    c.tomography_method =
        to_enum<TomographyMethod>(v, {{"mle", TomographyMethod::mle}, {"linear", TomographyMethod::linear}});
  };
  num("tomography.tol", [](ExperimentConfig& c) -> double& { return c.mle.tol; });
  s["tomography.max_iter"] = [](ExperimentConfig& c, const std::string& v) {
    const auto n = to_count(v);
    if (n < 1 || n > 100000000) throw std::invalid_argument("max_iter must be in [1, 1e8]");
    c.mle.max_iter = static_cast<int>(n);
  };

  s["g2.max_delay"] = [](ExperimentConfig& c, const std::string& v) {
    const auto n = to_count(v);
    if (n < 1 || n > 100000) throw std::invalid_argument("max_delay must be in [1, 100000]");
    c.g2_max_delay = static_cast<int>(n);
  };

  s["run.n_pulses"] = [](ExperimentConfig& c, const std::string& v) { c.n_pulses = to_count(v); };
  s["run.seed"] = [](ExperimentConfig& c, const std::string& v) { c.seed = to_count(v); };
  s["run.workers"] = [](ExperimentConfig& c, const std::string& v) {
    const auto n = to_count(v);
    if (n > 4096) throw std::invalid_argument("too many workers");
    c.workers = static_cast<unsigned>(n);
  };

  s["sweep.parameter"] = [](ExperimentConfig& c, const std::string& v) {
    c.sweep_parameter =
        to_enum<SweepParameter>(v, {{"theta", SweepParameter::theta}, {"shift", SweepParameter::shift}});
  };
  num("sweep.start", [](ExperimentConfig& c) -> double& { return c.sweep_start; });
  num("sweep.stop", [](ExperimentConfig& c) -> double& { return c.sweep_stop; });
  num("sweep.step", [](ExperimentConfig& c) -> double& { return c.sweep_step; });
  num("sweep.calibration", [](ExperimentConfig& c) -> double& { return c.sweep_calibration; });
  return s;
}

const std::vector<std::string> kRequired = {"theta_deg", "spectral.shift_cm", "rates.p_pair", "run.n_pulses"};

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Cross-field checks once every key has been applied.
void validate(const ExperimentConfig& c, const Parsed& parsed, std::vector<std::string>& problems) {
  auto guard = [&problems](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  };
  guard([&] { c.spectral.validate(); });
  guard([&] { c.rates.validate(); });
  if (c.spectral.shift_cm <= 0.0) problems.push_back("spectral.shift_cm: must be positive");
  if (!(c.werner_p >= 0.0 && c.werner_p <= 1.0)) problems.push_back("source.werner_p: must lie in [0, 1]");
  if (c.target_purity && !(*c.target_purity > 0.25 && *c.target_purity <= 1.0)) {
    problems.push_back("background.target_purity: must lie in (0.25, 1]");
  }
  if (c.n_pulses == 0) problems.push_back("run.n_pulses: must be positive");
  if (!(c.mle.tol > 0.0)) problems.push_back("tomography.tol: must be positive");
  if (!(c.sweep_step > 0.0)) problems.push_back("sweep.step: must be positive");
  if (c.sweep_stop < c.sweep_start) problems.push_back("sweep.stop: must not be below sweep.start");
  if ((c.sweep_stop - c.sweep_start) / c.sweep_step > 10000.0) problems.push_back("sweep: more than 10000 points");
  if (c.sweep_parameter == SweepParameter::shift && c.sweep_start <= 0.0) {
    problems.push_back("sweep.start: shifts must be positive");
  }
  if (!(c.sweep_calibration > 0.0)) problems.push_back("sweep.calibration: must be positive");
  if (!parsed.chsh_angle_keys.empty() && c.chsh_angles != ChshAngles::custom) {
    problems.push_back("chsh: explicit angles (" + *parsed.chsh_angle_keys.begin() +
                       ") need chsh.angles = custom");
  }
  if (c.target_purity && c.rates.p_triple != 0.0) {
    problems.push_back("background.target_purity: conflicts with an explicit rates.p_triple");
  }
  if (c.source == PairSource::crystal) {
    guard([&] { (void)generate_sas_state(c.laser, CrystalOrientation(c.theta_deg),
                                         path_amplitudes(c.spectral, c.model)); });
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  Parsed parsed;
  const auto setters = make_setters(parsed);
  ExperimentConfig config;
  std::vector<std::string> problems;
  std::map<std::string, std::string> seen;
  std::map<std::string, int> seen_line;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash_pos = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash_pos));
    if (line.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      problems.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (seen.count(key)) {
      problems.push_back(where + "key '" + key + "' repeats line " + std::to_string(seen_line[key]));
      continue;
    }
    if (value.empty()) {
      problems.push_back(where + "key '" + key + "' has no value");
      continue;
    }
    seen[key] = value;
    seen_line[key] = line_no;
    try {
      it->second(config, value);
    } catch (const std::exception& e) {
      problems.push_back(where + "key '" + key + "': " + e.what());
    }
  }

  std::string missing;
  for (const auto& k : kRequired)
    if (!seen.count(k)) missing += (missing.empty() ? "" : ", ") + k;
  if (!missing.empty()) problems.push_back(std::string(origin) + ": missing required keys: " + missing);

  if (!parsed.chsh_angle_keys.empty() && !parsed.chsh_mode_given) config.chsh_angles = ChshAngles::custom;
  if (problems.empty()) validate(config, parsed, problems);

  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw Error(ErrorKind::config_error, msg);
  }

  std::uint64_t h = fnv1a("");
  for (const auto& [k, v] : seen) h = fnv1a(k + "=" + v + "\n", h);
  config.hash = h;
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config_error, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::vector<std::string> config_keys() {
  Parsed parsed;
  std::vector<std::string> out;
  for (const auto& [k, v] : make_setters(parsed)) out.push_back(k);
  return out;
}

std::vector<std::string> required_config_keys() { return kRequired; }

ExperimentConfig load_preset(std::string_view name) {
  return parse_config(preset_text(name), "preset:" + std::string(name));
}

SourceModel build_source(const ExperimentConfig& config) {
  return build_source(config, config.theta_deg, config.spectral.shift_cm);
}

SourceModel build_source(const ExperimentConfig& config, double theta_deg, double shift_cm) {
  const CrystalOrientation theta(theta_deg);
  SpectralConfig spectral = config.spectral;
  spectral.shift_cm = shift_cm;
  const DensityMatrix4 pair =
      config.source == PairSource::werner
          ? werner_state(config.werner_p)
          : density_from_pure(generate_sas_state(config.laser, theta, path_amplitudes(spectral, config.model)));
  SourceModel model{pair, config.rates, single_polarization(config.singles.stokes, config.laser, theta),
                    single_polarization(config.singles.antistokes, config.laser, theta)};
  if (config.target_purity) model.rates.p_triple = tune_triple_probability(model, *config.target_purity);
  return model;
}

MeasurementSetting label_setting(std::string_view label) {
  if (label.size() != 2) throw Error(ErrorKind::config_error, "setting label must have two letters");
  return {std::string(label), tomography_plates(label[0]), tomography_plates(label[1])};
}

ChshSettings resolved_chsh(const ExperimentConfig& config, const SourceModel& source) {
  switch (config.chsh_angles) {
    case ChshAngles::canonical: return ChshSettings::canonical();
    case ChshAngles::custom: return config.chsh;
    case ChshAngles::optimal: return maximize_chsh(effective_coincidence_state(source).rho).settings;
  }
  return ChshSettings::canonical();
}

std::vector<MeasurementSetting> mode_settings(const ExperimentConfig& config, const SourceModel& source) {
  switch (config.mode) {
    case RunMode::chsh: {
      const auto m = resolved_chsh(config, source).measurement_settings();
      return {m.begin(), m.end()};
    }
    case RunMode::tomography: return tomography_settings(config.tomography_plan);
    case RunMode::basis: break;
  }
  std::vector<MeasurementSetting> out;
  for (const auto& l : config.analyzer_settings) out.push_back(label_setting(l));
  return out;
}

}  // namespace sasbell
