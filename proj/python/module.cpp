#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sasbell/config.hpp"
#include "sasbell/runner.hpp"

namespace py = pybind11;
using namespace sasbell;

namespace {

py::dict chsh_dict(const OptimalChsh& o) {
  py::dict d;
  d["s_max"] = o.s_max;
  d["a_deg"] = o.settings.a_deg;
  d["a_prime_deg"] = o.settings.a_prime_deg;
  d["b_deg"] = o.settings.b_deg;
  d["b_prime_deg"] = o.settings.b_prime_deg;
  d["stokes_phase_deg"] = o.settings.stokes_phase_deg;
  return d;
}

py::dict rows_dict(const CountsRow& r) {
  py::dict d;
  d["setting_id"] = r.setting.id;
  d["hwp_s_deg"] = r.setting.stokes.hwp_deg;
  d["qwp_s_deg"] = r.setting.stokes.qwp_deg;
  d["hwp_as_deg"] = r.setting.antistokes.hwp_deg;
  d["qwp_as_deg"] = r.setting.antistokes.qwp_deg;
  d["counts"] = std::array<std::uint64_t, 4>{r.counts.n_pp, r.counts.n_pm, r.counts.n_mp, r.counts.n_mm};
  d["n_pulses"] = r.counts.n_pulses;
  return d;
}

MeasurementSetting setting_from(double hwp_s, double qwp_s, double hwp_as, double qwp_as) {
  return {"custom", {hwp_s, qwp_s}, {hwp_as, qwp_as}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polarization-entangled Stokes/anti-Stokes pair simulation";
  m.attr("__version__") = SASBELL_VERSION;

  py::register_exception<Error>(m, "SasbellError", PyExc_ValueError);

  m.def(
      "generate_sas_state",
      [](double theta_deg, double shift_cm, double laser_deg) {
        SpectralConfig sp;
        sp.shift_cm = shift_cm;
        return generate_sas_state(JonesVector::linear(laser_deg), CrystalOrientation(theta_deg),
                                  path_amplitudes(sp, WeightModelParams{}))
            .amplitudes();
      },
      py::arg("theta_deg"), py::arg("shift_cm") = 900.0, py::arg("laser_deg") = 0.0,
      "Pair amplitudes in the (VV, VH, HV, HH) basis for the default weight model.");

  m.def(
      "raman_tensor", [](double theta_deg) { return raman_tensor_lab(CrystalOrientation(theta_deg)); },
      py::arg("theta_deg"));

  m.def(
      "density_from_pure", [](const Vector4c& psi) { return density_from_pure(TwoPhotonState(psi)).matrix(); },
      py::arg("amplitudes"));
  m.def(
      "werner_state", [](double p) { return werner_state(p).matrix(); }, py::arg("p"));
  m.def(
      "purity", [](const Matrix4c& rho) { return purity(DensityMatrix4::from_matrix(rho)); }, py::arg("rho"));
  m.def(
      "bell_weights", [](const Vector4c& psi) { return bell_decomposition(TwoPhotonState(psi)).weights(); },
      py::arg("amplitudes"), "Weights on (phi+, phi-, psi+, psi-).");

  m.def(
      "outcome_probabilities",
      [](const Matrix4c& rho, double hwp_s, double qwp_s, double hwp_as, double qwp_as) {
        return outcome_probabilities(DensityMatrix4::from_matrix(rho), setting_from(hwp_s, qwp_s, hwp_as, qwp_as));
      },
      py::arg("rho"), py::arg("hwp_s_deg"), py::arg("qwp_s_deg"), py::arg("hwp_as_deg"), py::arg("qwp_as_deg"),
      "Probabilities of (++, +-, -+, --) where + is the reflected PBS port.");

  m.def(
      "predict_optimal_s",
      [](std::complex<double> c1, std::complex<double> c2) {
        return chsh_dict(predict_optimal_S(TwoPhotonState::schmidt(c1, c2)));
      },
      py::arg("c1"), py::arg("c2"));
  m.def(
      "maximize_chsh", [](const Matrix4c& rho) { return chsh_dict(maximize_chsh(DensityMatrix4::from_matrix(rho))); },
      py::arg("rho"));

  m.def(
      "correlation_e",
      [](std::uint64_t pp, std::uint64_t pm, std::uint64_t mp, std::uint64_t mm) {
        const Estimate e = correlation_E({pp, pm, mp, mm, 0});
        return std::make_pair(e.value, e.std_error);
      },
      py::arg("n_pp"), py::arg("n_pm"), py::arg("n_mp"), py::arg("n_mm"));

  m.def(
      "tomography_noiseless",
      [](const Matrix4c& rho, bool mle) {
        const auto set = expected_tomography(DensityMatrix4::from_matrix(rho), TomographyPlan::full36, 1.0);
        return mle ? Matrix4c(tomography_mle(set).rho.matrix()) : tomography_linear(set).rho;
      },
      py::arg("rho"), py::arg("mle") = false,
      "Reconstruction from exact 36-setting probabilities, for checking the inversion.");

  m.def("preset_names", &preset_names);
  m.def("preset_text", [](const std::string& name) { return preset_text(name); }, py::arg("name"));
  m.def("config_keys", &config_keys);

  m.def(
      "simulate_config",
      [](const std::string& text, std::optional<std::uint64_t> seed) {
        ExperimentConfig c = parse_config(text);
        if (seed) c.seed = *seed;
        const SourceModel source = build_source(c);
        std::vector<CountsRow> rows;
        {
          py::gil_scoped_release release;
          rows = simulate_rows(c, source, mode_settings(c, source));
        }
        py::list out;
        for (const auto& r : rows) out.append(rows_dict(r));
        return out;
      },
      py::arg("config_text"), py::arg("seed") = py::none(), "Counts rows for a config in the flat key = value format.");

  m.def(
      "chsh_from_config",
      [](const std::string& text) {
        const ExperimentConfig c = parse_config(text);
        const SourceModel source = build_source(c);
        const auto settings = resolved_chsh(c, source).measurement_settings();
        ChshReport rep;
        {
          py::gil_scoped_release release;
          rep = analyze_chsh(simulate_rows(c, source, {settings.begin(), settings.end()}));
        }
        return std::make_pair(rep.s.value, rep.s.std_error);
      },
      py::arg("config_text"));
}
