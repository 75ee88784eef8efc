#include "sasbell/rng.hpp"

#include <cmath>
#include <limits>

namespace sasbell {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t block) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ (block * 0xd1b54a32d192ed03ULL));
}

std::uint64_t PulseRng::geometric_gap(double log1m_p) {
  const double g = std::floor(std::log(uniform_open()) / log1m_p);
  if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

}  // namespace sasbell
