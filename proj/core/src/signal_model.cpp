#include "nestdop/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nestdop/error.hpp"
#include "nestdop/parallel.hpp"

namespace nestdop {
namespace {

constexpr std::string_view kModule = "signal_model";

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

ToneSet::ToneSet(std::vector<Tone> tones) : tones_(std::move(tones)) {
  for (const auto& t : tones_) {
    if (!(t.frequency >= -0.5 && t.frequency < 0.5)) {
      throw_precondition(kModule, "tone frequency " + std::to_string(t.frequency) +
                                      " outside the unambiguous range [-1/2, 1/2)");
    }
    if (!(t.power >= 0.0)) throw_precondition(kModule, "tone power must be nonnegative");
  }
}

double ToneSet::total_power() const noexcept {
  double sum = 0.0;
  for (const auto& t : tones_) sum += t.power;
  return sum;
}

std::optional<double> ToneSet::peak_frequency() const noexcept {
  if (tones_.empty()) return std::nullopt;
  auto it = std::max_element(tones_.begin(), tones_.end(),
                             [](const Tone& a, const Tone& b) { return a.power < b.power; });
  return it->frequency;
}

SlowTimeSnapshots::SlowTimeSnapshots(EmissionPattern pattern, ComplexMatrix data,
                                     double noise_power)
    : pattern_(std::move(pattern)), data_(std::move(data)), noise_power_(noise_power) {
  if (data_.rows() < 1) throw_precondition(kModule, "snapshots need Q >= 1 rows");
  if (static_cast<std::size_t>(data_.cols()) != pattern_.size()) {
    throw_precondition(kModule, "snapshot column count " + std::to_string(data_.cols()) +
                                    " does not match the pattern's " +
                                    std::to_string(pattern_.size()) + " emissions");
  }
  if (!(noise_power_ >= 0.0)) throw_precondition(kModule, "noise power must be nonnegative");
}

SlowTimeSnapshots generate_snapshots(const ToneSet& tones, const EmissionPattern& pattern,
                                     int snapshot_count, double noise_power,
                                     std::uint64_t seed) {
  if (snapshot_count < 1) throw_precondition(kModule, "snapshot count Q must be >= 1");
  if (!(noise_power >= 0.0)) throw_precondition(kModule, "noise power must be nonnegative");

  const auto slots = pattern.slots();
  const Eigen::Index n = static_cast<Eigen::Index>(slots.size());
  const Eigen::Index m = static_cast<Eigen::Index>(tones.size());

  ComplexMatrix steering(n, m);
  for (Eigen::Index col = 0; col < m; ++col) {
    const double nu = tones.tones()[static_cast<std::size_t>(col)].frequency;
    for (Eigen::Index row = 0; row < n; ++row)
      steering(row, col) = std::polar(1.0, kTwoPi * nu * (slots[row] - 1));
  }

  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto circular = [&](double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = gauss(engine);
    const double im = gauss(engine);
    return Complex(s * re, s * im);
  };

  ComplexMatrix data(snapshot_count, n);
  ComplexVector amplitudes(m);
  for (int k = 0; k < snapshot_count; ++k) {
    for (Eigen::Index col = 0; col < m; ++col)
      amplitudes(col) = circular(tones.tones()[static_cast<std::size_t>(col)].power);
    data.row(k) = (steering * amplitudes).transpose();
    for (Eigen::Index col = 0; col < n; ++col) data(k, col) += circular(noise_power);
  }
  return SlowTimeSnapshots(pattern, std::move(data), noise_power);
}

ComplexMatrix analytic_covariance(const ToneSet& tones, const EmissionPattern& pattern,
                                  double noise_power) {
  const auto slots = pattern.slots();
  const Eigen::Index n = static_cast<Eigen::Index>(slots.size());
  ComplexMatrix cov = ComplexMatrix::Identity(n, n) * noise_power;
  for (const auto& tone : tones.tones()) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index a = 0; a < n; ++a)
        cov(a, b) += tone.power * std::polar(1.0, kTwoPi * tone.frequency * (slots[a] - slots[b]));
    }
  }
  return cov;
}

double noise_power_for_snr(double signal_power, double snr_db) {
  return signal_power / std::pow(10.0, snr_db / 10.0);
}

void PulsatileProfile::validate() const {
  if (frames.empty()) throw_precondition(kModule, "pulsatile profile has no frames");
  if (!clutter.empty() && clutter.size() != 1 && clutter.size() != frames.size()) {
    throw_precondition(kModule, "clutter list must be empty, a single entry, or one per frame");
  }
  if (cpis_per_frame < 1) throw_precondition(kModule, "cpis_per_frame must be >= 1");
  for (const auto& c : clutter) {
    if (!(c.frequency >= -0.5 && c.frequency < 0.5))
      throw_precondition(kModule, "clutter frequency outside [-1/2, 1/2)");
  }
}

ToneSet PulsatileProfile::frame_tones(std::size_t frame) const {
  const auto& blood = frames.at(frame);
  if (clutter.empty()) return blood;
  const auto& spec = clutter.size() == 1 ? clutter.front() : clutter.at(frame);
  auto tones = blood.tones();
  const double reference = blood.total_power() > 0.0 ? blood.total_power() : 1.0;
  tones.push_back({spec.frequency, reference * std::pow(10.0, spec.relative_db / 10.0)});
  return ToneSet(std::move(tones));
}

PulsatileProfile sinusoidal_profile(const SinusoidalProfileSpec& spec) {
  if (spec.frames < 1 || spec.tones_per_frame < 1 || !(spec.period_frames > 0.0))
    throw_precondition(kModule, "sinusoidal profile needs frames, tones and period > 0");
  PulsatileProfile profile;
  profile.frames.reserve(static_cast<std::size_t>(spec.frames));
  for (int f = 0; f < spec.frames; ++f) {
    const double peak = spec.center + spec.swing * std::sin(kTwoPi * f / spec.period_frames);
    const double direction = peak >= 0.0 ? -1.0 : 1.0;
    std::vector<Tone> tones;
    double power = spec.peak_power;
    for (int t = 0; t < spec.tones_per_frame; ++t) {
      tones.push_back({wrap_frequency(peak + direction * t * spec.tone_spacing), power});
      power *= spec.tone_decay;
    }
    profile.frames.emplace_back(std::move(tones));
  }
  if (spec.clutter) profile.clutter.push_back(*spec.clutter);
  profile.validate();
  return profile;
}

std::vector<SlowTimeSnapshots> generate_pulsatile(const PulsatileProfile& profile,
                                                  const EmissionPattern& pattern,
                                                  int snapshot_count, double noise_power,
                                                  std::uint64_t seed) {
  profile.validate();
  std::vector<std::optional<SlowTimeSnapshots>> frames(profile.frames.size());
  parallel_for(frames.size(), [&](std::size_t f) {
    frames[f] = generate_snapshots(profile.frame_tones(f), pattern, snapshot_count,
                                   noise_power, seed + f);
  });
  std::vector<SlowTimeSnapshots> out;
  out.reserve(frames.size());
  for (auto& f : frames) out.push_back(std::move(*f));
  return out;
}

}  // namespace nestdop
