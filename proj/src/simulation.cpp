#include "sasbell/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "sasbell/rng.hpp"

namespace sasbell {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::invalid_rates, std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

// Independent per-pulse Bernoulli processes, drawn by geometric skipping.
enum Process : std::uint8_t {
  kPair = 0,
  kStokesSingle,
  kAntiStokesSingle,
  kDarkSReflected,
  kDarkSTransmitted,
  kDarkAsReflected,
  kDarkAsTransmitted,
  kProcessCount
};

constexpr int kNoClick = -1;

struct ArmOutcomes {
  int stokes = kNoClick;
  int antistokes = kNoClick;
};

struct PulseEvent {
  std::uint32_t offset;
  std::uint8_t process;
};

// Precomputed per-setting probabilities.
struct Kernel {
  std::array<double, 4> pair_cumulative{};
  double stokes_single_reflected = 0.5;
  double antistokes_single_reflected = 0.5;
  std::array<double, kProcessCount> p{};
  std::array<double, kProcessCount> log1m_p{};
  SourceRates rates;

  Kernel(const SourceModel& model, const MeasurementSetting& setting) : rates(model.rates) {
    const auto probs = outcome_probabilities(model.pair, setting);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      acc += probs[static_cast<std::size_t>(i)];
      pair_cumulative[static_cast<std::size_t>(i)] = acc;
    }
    stokes_single_reflected = reflected_probability(model.stokes_single, setting.stokes);
    antistokes_single_reflected = reflected_probability(model.antistokes_single, setting.antistokes);
    p = {rates.p_pair, rates.p_s_single, rates.p_as_single, rates.dark_s, rates.dark_s, rates.dark_as, rates.dark_as};
    for (std::size_t i = 0; i < p.size(); ++i) log1m_p[i] = std::log1p(-p[i]);
  }

  int sample_pair_outcome(PulseRng& rng) const {
    const double u = rng.uniform() * pair_cumulative[3];
    for (int i = 0; i < 3; ++i)
      if (u < pair_cumulative[static_cast<std::size_t>(i)]) return i;
    return 3;
  }
};

int port_bit(int port) { return 1 << port; }

int squash(int mask, PulseRng& rng) {
  switch (mask) {
    case 0: return kNoClick;
    case 1: return 0;
    case 2: return 1;
    default: return rng.bernoulli(0.5) ? 0 : 1;
  }
}

ArmOutcomes resolve_pulse(unsigned flags, const Kernel& k, PulseRng& rng) {
  int s_mask = 0;
  int a_mask = 0;
  if (flags & (1u << kPair)) {
    const int outcome = k.sample_pair_outcome(rng);
    if (rng.bernoulli(k.rates.eta_s)) s_mask |= port_bit(outcome >> 1);
    if (rng.bernoulli(k.rates.eta_as)) a_mask |= port_bit(outcome & 1);
    if (k.rates.p_triple > 0.0 && rng.bernoulli(k.rates.p_triple)) {
      const int port = rng.bernoulli(k.stokes_single_reflected) ? 0 : 1;
      if (rng.bernoulli(k.rates.eta_s)) s_mask |= port_bit(port);
    }
  }
  if (flags & (1u << kStokesSingle)) {
    const int port = rng.bernoulli(k.stokes_single_reflected) ? 0 : 1;
    if (rng.bernoulli(k.rates.eta_s)) s_mask |= port_bit(port);
  }
  if (flags & (1u << kAntiStokesSingle)) {
    const int port = rng.bernoulli(k.antistokes_single_reflected) ? 0 : 1;
    if (rng.bernoulli(k.rates.eta_as)) a_mask |= port_bit(port);
  }
  if (flags & (1u << kDarkSReflected)) s_mask |= 1;
  if (flags & (1u << kDarkSTransmitted)) s_mask |= 2;
  if (flags & (1u << kDarkAsReflected)) a_mask |= 1;
  if (flags & (1u << kDarkAsTransmitted)) a_mask |= 2;
  ArmOutcomes out;
  out.stokes = squash(s_mask, rng);
  out.antistokes = squash(a_mask, rng);
  return out;
}

// Runs one block of pulses and hands every pulse with at least one click to
// `sink(pulse_index, outcomes)` in increasing pulse order.
template <typename Sink>
void run_block(const Kernel& k, std::uint64_t seed, std::uint64_t block, std::uint64_t n_pulses, Sink&& sink) {
  const std::uint64_t first = block * kPulsesPerBlock;
  const std::uint64_t count = std::min(kPulsesPerBlock, n_pulses - first);
  PulseRng rng(derive_seed(seed, 0, block));

  std::vector<PulseEvent> events;
  for (std::uint8_t proc = 0; proc < kProcessCount; ++proc) {
    const double p = k.p[proc];
    if (p <= 0.0) continue;
    if (p >= 1.0) {
      for (std::uint64_t i = 0; i < count; ++i) events.push_back({static_cast<std::uint32_t>(i), proc});
      continue;
    }
    std::uint64_t pos = rng.geometric_gap(k.log1m_p[proc]);
    while (pos < count) {
      events.push_back({static_cast<std::uint32_t>(pos), proc});
      const std::uint64_t gap = rng.geometric_gap(k.log1m_p[proc]);
      if (gap >= count) break;
      pos += 1 + gap;
    }
  }
  std::sort(events.begin(), events.end(), [](const PulseEvent& a, const PulseEvent& b) {
    return a.offset != b.offset ? a.offset < b.offset : a.process < b.process;
  });

  for (std::size_t i = 0; i < events.size();) {
    const std::uint32_t offset = events[i].offset;
    unsigned flags = 0;
    for (; i < events.size() && events[i].offset == offset; ++i) flags |= 1u << events[i].process;
    const ArmOutcomes out = resolve_pulse(flags, k, rng);
    if (out.stokes != kNoClick || out.antistokes != kNoClick) sink(first + offset, out);
  }
}

// Calls `work(block)` for every block, spread over worker threads.
template <typename Work>
void for_each_block(std::uint64_t n_blocks, unsigned workers, Work&& work) {
  unsigned n = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n = static_cast<unsigned>(std::min<std::uint64_t>(n, n_blocks));
  if (n <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) work(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t b = next++; b < n_blocks; b = next++) work(b);
    });
  }
}

std::uint64_t block_count(std::uint64_t n_pulses) { return (n_pulses + kPulsesPerBlock - 1) / kPulsesPerBlock; }

}  // namespace

void SourceRates::validate() const {
  check_probability(p_pair, "p_pair");
  check_probability(p_s_single, "p_s_single");
  check_probability(p_as_single, "p_as_single");
  check_probability(p_triple, "p_triple");
  check_probability(eta_s, "eta_s");
  check_probability(eta_as, "eta_as");
  check_probability(dark_s, "dark_s");
  check_probability(dark_as, "dark_as");
  if (!(rep_period_ns > 0.0)) throw Error(ErrorKind::invalid_rates, "rep_period_ns must be positive");
  const int active = (p_pair > 0.0) + (p_s_single > 0.0) + (p_as_single > 0.0);
  const double occupancy = p_pair + p_s_single + p_as_single;
  if (active > 1 && !(occupancy < 0.5)) {
    throw Error(ErrorKind::invalid_rates,
                "pulse occupancy p_pair + p_s_single + p_as_single = " + std::to_string(occupancy) +
                    " must stay below 0.5");
  }
}

SourceModel SourceModel::for_crystal(const DensityMatrix4& pair, const SourceRates& rates, const JonesVector& laser,
                                     const CrystalOrientation& theta) {
  return SourceModel{pair, rates, raman_single_state(laser, theta), unpolarized()};
}

std::uint64_t CoincidenceCounts::at(int outcome) const {
  switch (outcome) {
    case 0: return n_pp;
    case 1: return n_pm;
    case 2: return n_mp;
    case 3: return n_mm;
    default: throw std::out_of_range("outcome index");
  }
}

std::uint64_t& CoincidenceCounts::at(int outcome) {
  switch (outcome) {
    case 0: return n_pp;
    case 1: return n_pm;
    case 2: return n_mp;
    case 3: return n_mm;
    default: throw std::out_of_range("outcome index");
  }
}

CoincidenceCounts& CoincidenceCounts::operator+=(const CoincidenceCounts& other) {
  n_pp += other.n_pp;
  n_pm += other.n_pm;
  n_mp += other.n_mp;
  n_mm += other.n_mm;
  n_pulses += other.n_pulses;
  return *this;
}

CoincidenceCounts simulate_counts(const SourceModel& model, const MeasurementSetting& setting, std::uint64_t n_pulses,
                                  std::uint64_t seed, const SimulationOptions& options) {
  model.rates.validate();
  const Kernel kernel(model, setting);
  const std::uint64_t n_blocks = block_count(n_pulses);
  std::vector<CoincidenceCounts> partial(n_blocks);
  for_each_block(n_blocks, options.workers, [&](std::uint64_t b) {
    CoincidenceCounts& c = partial[b];
    run_block(kernel, seed, b, n_pulses, [&c](std::uint64_t, const ArmOutcomes& out) {
      if (out.stokes != kNoClick && out.antistokes != kNoClick) ++c.at(2 * out.stokes + out.antistokes);
    });
  });
  CoincidenceCounts total;
  for (const auto& c : partial) total += c;
  total.n_pulses = n_pulses;
  return total;
}

DelayHistogram delay_histogram(const SourceModel& model, std::uint64_t n_pulses, int max_delay, std::uint64_t seed,
                               const SimulationOptions& options) {
  if (max_delay < 1) throw Error(ErrorKind::config_error, "delay window must include at least one off-center bin");
  model.rates.validate();
  const MeasurementSetting vh{"VH-basis", {}, {}};
  const Kernel kernel(model, vh);
  const std::uint64_t n_blocks = block_count(n_pulses);
  std::vector<std::vector<std::uint64_t>> s_clicks(n_blocks), a_clicks(n_blocks);
  for_each_block(n_blocks, options.workers, [&](std::uint64_t b) {
    run_block(kernel, seed, b, n_pulses, [&](std::uint64_t pulse, const ArmOutcomes& out) {
      if (out.stokes != kNoClick) s_clicks[b].push_back(pulse);
      if (out.antistokes != kNoClick) a_clicks[b].push_back(pulse);
    });
  });
  std::vector<std::uint64_t> s, a;
  for (std::uint64_t b = 0; b < n_blocks; ++b) {
    s.insert(s.end(), s_clicks[b].begin(), s_clicks[b].end());
    a.insert(a.end(), a_clicks[b].begin(), a_clicks[b].end());
  }

  DelayHistogram h(max_delay);
  const auto k = static_cast<std::uint64_t>(max_delay);
  std::size_t lo = 0;
  for (const std::uint64_t n : s) {
    while (lo < a.size() && a[lo] + k < n) ++lo;
    for (std::size_t j = lo; j < a.size() && a[j] <= n + k; ++j) {
      ++h.at(static_cast<int>(static_cast<std::int64_t>(a[j]) - static_cast<std::int64_t>(n)));
    }
  }
  return h;
}

G2Estimate g2_zero(const DelayHistogram& h) {
  if (h.max_delay < 1) throw Error(ErrorKind::insufficient_data, "histogram has no off-center bins");
  double off = 0.0;
  for (int k = -h.max_delay; k <= h.max_delay; ++k)
    if (k != 0) off += static_cast<double>(h.at(k));
  if (off <= 0.0) throw Error(ErrorKind::insufficient_data, "all off-center delay bins are empty");
  const double n_off = 2.0 * h.max_delay;
  const double center = static_cast<double>(h.at(0));
  G2Estimate g;
  g.value = center / (off / n_off);
  // var(c)/c^2 + var(sum off)/(sum off)^2 with Poisson variances
  const double rel2 = (center > 0.0 ? 1.0 / center : 0.0) + 1.0 / off;
  g.std_error = center > 0.0 ? g.value * std::sqrt(rel2) : n_off / off;
  return g;
}

}  // namespace sasbell
