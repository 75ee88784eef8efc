#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sasbell {

/// Generator identity written into run metadata.
inline constexpr std::string_view kRngIdentity = "mt19937_64;seed=splitmix64(master,stream,block);block=65536";

inline constexpr std::uint64_t kPulsesPerBlock = 65536;

/// One step of the splitmix64 output function.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent substream, derived from a master seed and a
/// (stream, block) address. Depends only on its arguments, never on how the
/// work is split between threads.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t block = 0);

/// mt19937_64 with the floating-point conversions written out so that results
/// are identical across standard library implementations.
class PulseRng {
 public:
  explicit PulseRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Number of failures before the next success of a Bernoulli(p) sequence,
  /// given log(1 - p) for p in (0, 1).
  std::uint64_t geometric_gap(double log1m_p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sasbell
