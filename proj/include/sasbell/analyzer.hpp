#pragma once

#include <array>
#include <string>

#include "sasbell/polarization.hpp"

namespace sasbell {

/// Jones matrix of a retarder with fast axis at `angle_deg` from V and
/// retardance `retardance_rad`, phased to be special unitary.
Matrix2c waveplate_jones(double angle_deg, double retardance_rad);
Matrix2c hwp_jones(double angle_deg);
Matrix2c qwp_jones(double angle_deg);

/// One arm of the detection chain: photon -> HWP -> QWP -> PBS.
/// Angles are fast-axis orientations in degrees from V, meaningful modulo 180.
struct WaveplateSetting {
  double hwp_deg = 0.0;
  double qwp_deg = 0.0;

  /// QWP * HWP, the operator applied before the PBS.
  Matrix2c chain() const;

  /// Plates that send linear polarization at `angle_deg` to the reflected port.
  static WaveplateSetting linear_analyzer(double angle_deg);
  /// Plates that send `target` to the reflected port.
  static WaveplateSetting for_state(const JonesVector& target);
};

/// PBS outputs. Reflected passes V and transmitted passes H at the PBS; the
/// reflected port is the "+" outcome in every count table.
enum class Port : int { reflected = 0, transmitted = 1 };

inline constexpr std::array<Port, 2> kPorts{Port::reflected, Port::transmitted};

/// Input polarization that exits through `port`: (chain)^dagger |port>.
Vector2c analyzer_state(const WaveplateSetting& plates, Port port);
/// Rank-1 single-photon projector onto `analyzer_state`.
Matrix2c arm_projector(const WaveplateSetting& plates, Port port);

struct ArmAnalyzer {
  WaveplateSetting plates;
  Port port = Port::reflected;
};

struct AnalyzerSetting {
  ArmAnalyzer stokes;
  ArmAnalyzer antistokes;
};

/// Tr[rho (P_S (x) P_aS)].
double joint_probability(const DensityMatrix4& rho, const AnalyzerSetting& setting);

/// Waveplate configuration of both arms; all four port combinations are
/// recorded for it in one count table row.
struct MeasurementSetting {
  std::string id;
  WaveplateSetting stokes;
  WaveplateSetting antistokes;

  AnalyzerSetting with_ports(Port s, Port a) const { return {{stokes, s}, {antistokes, a}}; }
};

/// Outcome index used by count tables: (++, +-, -+, --) = 2*s + a.
constexpr int outcome_index(Port s, Port a) { return 2 * static_cast<int>(s) + static_cast<int>(a); }

Matrix4c joint_projector(const MeasurementSetting& setting, Port s, Port a);

/// Joint outcome probabilities ordered (++, +-, -+, --).
std::array<double, 4> outcome_probabilities(const DensityMatrix4& rho, const MeasurementSetting& setting);

/// Probability that a single photon in state `sigma` leaves through the reflected port.
double reflected_probability(const Matrix2c& sigma, const WaveplateSetting& plates);

}  // namespace sasbell
