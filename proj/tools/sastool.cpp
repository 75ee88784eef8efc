#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "sasbell/runner.hpp"

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string input;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool analysis) {
  cmd->add_option("--config", c.config, "Experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", c.preset, "Built-in scenario instead of a config file");
  cmd->add_option("--seed", c.seed, "Override run.seed");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  if (analysis) cmd->add_option("--input", c.input, "Counts or histogram CSV to analyze instead of simulating");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sasbell;

  CLI::App app{"Simulation and analysis of polarization-entangled Stokes/anti-Stokes photon pairs"};
  app.set_version_flag("--version", std::string(SASBELL_VERSION));
  app.require_subcommand(1);

  Common c;
  auto* simulate = app.add_subcommand("simulate", "Simulate coincidence counts for the configured settings");
  auto* chsh = app.add_subcommand("chsh", "CHSH parameter from simulated or recorded counts");
  auto* tomo = app.add_subcommand("tomography", "Two-photon state reconstruction");
  auto* g2 = app.add_subcommand("g2", "Delay histogram and zero-delay cross-correlation");
  auto* sweep = app.add_subcommand("sweep", "Counts versus orientation or Raman shift, long format");
  auto* presets = app.add_subcommand("presets", "List or print built-in scenarios");
  add_common(simulate, c, false);
  add_common(chsh, c, true);
  add_common(tomo, c, true);
  add_common(g2, c, true);
  add_common(sweep, c, false);
  std::string show;
  presets->add_option("name", show, "Print this preset's config text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (presets->parsed()) {
      if (show.empty())
        for (const auto& n : preset_names()) std::cout << n << '\n';
      else
        std::cout << preset_text(show);
      return 0;
    }
    if (!c.config.empty() && !c.preset.empty()) {
      throw Error(ErrorKind::config_error, "--config and --preset are mutually exclusive");
    }

    std::optional<ExperimentConfig> config;
    RunOptions opts;
    opts.out_dir = c.out;
    if (!c.config.empty()) {
      config = load_config(c.config);
      opts.config_origin = c.config;
    } else if (!c.preset.empty()) {
      config = load_preset(c.preset);
      opts.config_origin = "preset:" + c.preset;
    }
    if (config && c.seed) config->seed = *c.seed;
    if (!c.input.empty()) opts.input = c.input;

    const bool needs_config = simulate->parsed() || sweep->parsed() || c.input.empty();
    if (needs_config && !config) throw Error(ErrorKind::config_error, "one of --config or --preset is required");

    const ExperimentConfig* cfg = config ? &*config : nullptr;
    RunOutput out;
    if (simulate->parsed())
      out = run_simulate(*config, opts);
    else if (chsh->parsed())
      out = run_chsh(cfg, opts);
    else if (tomo->parsed())
      out = run_tomography(cfg, opts);
    else if (g2->parsed())
      out = run_g2(cfg, opts);
    else
      out = run_sweep(*config, opts);

    std::cout << out.summary << '\n';
    for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
    if (out.exit_code != 0) std::cerr << "error: ConvergenceFailure\n";
    return out.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
