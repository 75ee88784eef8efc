#include <doctest.h>

#include "oracles.hpp"
#include "sasbell/crystal.hpp"

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

PathAmplitudes default_amps(double shift) {
  SpectralConfig sp;
  sp.shift_cm = shift;
  return path_amplitudes(sp, WeightModelParams{});
}

}  // namespace

TEST_SUITE("crystal") {
  TEST_CASE("Raman tensor in the lab frame") {
    const auto t0 = raman_tensor_lab(CrystalOrientation(0.0));
    CHECK((t0 - (Eigen::Matrix2d() << 0, 1, 1, 0).finished()).norm() < 1e-15);
    const auto t45 = raman_tensor_lab(CrystalOrientation(45.0));
    CHECK((t45 - (Eigen::Matrix2d() << 1, 0, 0, -1).finished()).norm() < 1e-15);
    const auto t90 = raman_tensor_lab(CrystalOrientation(90.0));
    CHECK((t90 - (Eigen::Matrix2d() << 0, -1, -1, 0).finished()).norm() < 1e-15);
  }

  TEST_CASE("Raman tensor equals the explicit rotation R^T alpha R") {
    for (double th = -180.0; th <= 180.0; th += 7.3) {
      const auto ref = oracle::rotated_raman(th);
      const auto lab = raman_tensor_lab(CrystalOrientation(th));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(lab(i, j) - ref[i][j]) < 1e-14);
      // 90 deg rotation flips the sign, so intensities repeat
      CHECK((raman_tensor_lab(CrystalOrientation(th + 90.0)) + lab).norm() < 1e-13);
    }
  }

  TEST_CASE("electronic tensor is the identity") {
    for (double th : {0.0, 45.0, 33.7, -12.0})
      CHECK((electronic_tensor_lab(CrystalOrientation(th)) - Eigen::Matrix2d::Identity()).norm() == 0.0);
  }

  TEST_CASE("orientation reduction") {
    CHECK(CrystalOrientation(0.0).reduced_degrees() == doctest::Approx(0.0));
    CHECK(CrystalOrientation(135.0).reduced_degrees() == doctest::Approx(45.0));
    CHECK(CrystalOrientation(-30.0).reduced_degrees() == doctest::Approx(60.0));
    CHECK(CrystalOrientation(90.0).reduced_degrees() == doctest::Approx(0.0));
    CHECK(CrystalOrientation(135.0).degrees() == 135.0);
  }

  TEST_CASE("spectral config") {
    SpectralConfig sp;
    sp.shift_cm = 1234.5;
    CHECK(2.0 * sp.omega_laser_cm == sp.omega_stokes_cm() + sp.omega_antistokes_cm());
    CHECK(sp.detuning_cm() == doctest::Approx(1332.0 - 1234.5));
    CHECK(sp.omega_laser_cm == doctest::Approx(1e7 / 785.0));
    SpectralConfig bad = sp;
    bad.shift_cm = 0.0;
    CHECK(throws_kind(ErrorKind::config_error, [&] { bad.validate(); }));
    bad = sp;
    bad.gamma_phonon_cm = -1.0;
    CHECK(throws_kind(ErrorKind::config_error, [&] { bad.validate(); }));
  }

  TEST_CASE("path amplitudes: resonance peak and calibration") {
    SpectralConfig sp;
    const WeightModelParams cal = calibrate(WeightModelParams{}, sp);
    REQUIRE(cal.g_r.has_value());
    sp.shift_cm = sp.omega_phonon_cm;
    const auto on = path_amplitudes(sp, cal);
    CHECK(std::abs(std::abs(on.raman) - 2.0 * *cal.g_r / sp.gamma_phonon_cm) < 1e-12);

    // |A_R| is largest on resonance
    for (double shift = 600.0; shift <= 2100.0; shift += 10.0) {
      sp.shift_cm = shift;
      CHECK(std::abs(path_amplitudes(sp, cal).raman) <= std::abs(on.raman) + 1e-15);
    }

    const auto a900 = default_amps(900.0), a1900 = default_amps(1900.0);
    CHECK(std::norm(a1900.raman) / std::norm(a900.raman) < 1.0);
    const double ratio = std::norm(a900.raman) / std::norm(a900.electronic);
    CHECK(std::abs(ratio - 0.28 / 0.72) < 1e-12);
    // real and same sign at the anchor
    CHECK(std::abs(a900.raman.imag()) < 1e-12);
    CHECK(a900.raman.real() > 0.0);
    CHECK(a900.electronic.real() > 0.0);
  }

  TEST_CASE("electronic path decays monotonically") {
    double prev = 1e300;
    for (double shift = 500.0; shift <= 2500.0; shift += 25.0) {
      const double ae = std::abs(default_amps(shift).electronic);
      CHECK(ae < prev);
      prev = ae;
    }
  }

  TEST_CASE("explicit g_r and phase are used as given") {
    SpectralConfig sp;
    WeightModelParams m;
    m.g_r = 10.0;
    m.relative_phase_deg = 90.0;
    const auto a = path_amplitudes(sp, m);
    CHECK(std::abs(std::arg(a.electronic) - std::numbers::pi / 2) < 1e-12);
    CHECK(std::abs(std::abs(a.raman) - 10.0 / std::abs(Complex(sp.detuning_cm(), -sp.gamma_phonon_cm / 2))) < 1e-12);
  }

  TEST_CASE("generate_sas_state examples") {
    const auto psi = generate_sas_state(JonesVector::vertical(), CrystalOrientation(0.0), default_amps(900.0));
    CHECK(std::abs(psi.amplitude(PairBasis::VV) - std::sqrt(0.72)) < 1e-12);
    CHECK(std::abs(psi.amplitude(PairBasis::HH) - std::sqrt(0.28)) < 1e-12);
    CHECK(std::abs(psi.amplitude(PairBasis::VH)) < 1e-15);

    for (double shift : {900.0, 1332.0, 1900.0}) {
      const auto p45 = generate_sas_state(JonesVector::vertical(), CrystalOrientation(45.0), default_amps(shift));
      CHECK(std::abs(p45.probabilities()[0] - 1.0) < 1e-12);
    }

    const PathAmplitudes electronic_only(1.0, 0.0);
    for (double th = 0.0; th < 180.0; th += 11.0) {
      const auto p = generate_sas_state(JonesVector::vertical(), CrystalOrientation(th), electronic_only);
      CHECK(std::abs(p.probabilities()[0] - 1.0) < 1e-15);
    }

    // |c1|^2 = |A_e|^2 / (|A_e|^2 + |A_R|^2) for laser V at theta = 0
    const PathAmplitudes custom(Complex(0.3, 0.1), Complex(-0.5, 0.7));
    const auto pc = generate_sas_state(JonesVector::vertical(), CrystalOrientation(0.0), custom);
    CHECK(std::abs(pc.probabilities()[0] - std::norm(custom.electronic) /
                                              (std::norm(custom.electronic) + std::norm(custom.raman))) < 1e-12);
  }

  TEST_CASE("degenerate paths") {
    CHECK(throws_kind(ErrorKind::degenerate_input, [] { PathAmplitudes(0.0, 0.0); }));
    // equal and opposite paths cancel for laser V at 45 deg
    CHECK(throws_kind(ErrorKind::degenerate_input, [] {
      generate_sas_state(JonesVector::vertical(), CrystalOrientation(45.0), PathAmplitudes(1.0, -1.0));
    }));
  }

  TEST_CASE("90 deg periodicity of the outcome probabilities") {
    oracle::Gen gen(11);
    for (int t = 0; t < 100; ++t) {
      const JonesVector laser(gen.pure2());
      const PathAmplitudes amps(Complex(gen.normal(), gen.normal()), Complex(gen.normal(), gen.normal()));
      const double th = gen.uniform(-180.0, 180.0);
      const auto p0 = generate_sas_state(laser, CrystalOrientation(th), amps).probabilities();
      const auto p1 = generate_sas_state(laser, CrystalOrientation(th + 90.0), amps).probabilities();
      CHECK((p0 - p1).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("no cross-polarized amplitude for laser V at 0, 45, 90 deg") {
    for (double shift : {900.0, 1332.0, 1900.0})
      for (double th : {0.0, 45.0, 90.0}) {
        const auto p = generate_sas_state(JonesVector::vertical(), CrystalOrientation(th), default_amps(shift))
                           .probabilities();
        CHECK(p[1] + p[2] < 1e-20);
      }
  }

  TEST_CASE("state is continuous in theta") {
    const auto amps = default_amps(1332.0);
    Eigen::Vector4d prev = generate_sas_state(JonesVector::vertical(), CrystalOrientation(0.0), amps).probabilities();
    for (int i = 1; i <= 3600; ++i) {
      const double th = 0.05 * i;
      const auto p = generate_sas_state(JonesVector::vertical(), CrystalOrientation(th), amps).probabilities();
      CHECK((p - prev).cwiseAbs().maxCoeff() < 0.01);
      prev = p;
    }
  }

  TEST_CASE("calibration round trip") {
    for (double gamma : {50.0, 300.0, 700.0, 1500.0})
      for (double w : {2000.0, 8000.0, 30000.0}) {
        SpectralConfig sp;
        sp.gamma_phonon_cm = gamma;
        WeightModelParams m;
        m.decay_width_cm = w;
        const auto cal = calibrate(m, sp);
        const auto psi = generate_sas_state(JonesVector::vertical(), CrystalOrientation(0.0), path_amplitudes(sp, cal));
        CHECK(std::abs(psi.probabilities()[3] - 0.28) < 1e-6);
      }
  }

  TEST_CASE("Raman-scattered single photon polarization") {
    // laser V at theta = 0 scatters into H; at 45 deg it stays V
    const Matrix2c s0 = raman_single_state(JonesVector::vertical(), CrystalOrientation(0.0));
    CHECK(std::abs(s0(1, 1) - 1.0) < 1e-15);
    const Matrix2c s45 = raman_single_state(JonesVector::vertical(), CrystalOrientation(45.0));
    CHECK(std::abs(s45(0, 0) - 1.0) < 1e-15);
  }

  TEST_CASE("resonance enhances the HH share") {
    const auto p900 = generate_sas_state(JonesVector::vertical(), CrystalOrientation(0.0), default_amps(900.0));
    const auto p1332 = generate_sas_state(JonesVector::vertical(), CrystalOrientation(0.0), default_amps(1332.0));
    CHECK(p1332.probabilities()[3] > p900.probabilities()[3]);
    const double b900 = pair_brightness(JonesVector::vertical(), CrystalOrientation(0.0), default_amps(900.0));
    const double b1332 = pair_brightness(JonesVector::vertical(), CrystalOrientation(0.0), default_amps(1332.0));
    CHECK(b1332 > b900);
  }
}
