#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nestdop/array_design.hpp"
#include "nestdop/types.hpp"

namespace nestdop {

/// One scatterer population: normalized Doppler frequency (cycles per
/// PRI) and its amplitude variance.
struct Tone {
  double frequency = 0.0;
  double power = 0.0;
};

/// Stationary multi-tone content of one CPI.
class ToneSet {
 public:
  ToneSet() = default;
  explicit ToneSet(std::vector<Tone> tones);

  const std::vector<Tone>& tones() const noexcept { return tones_; }
  std::size_t size() const noexcept { return tones_.size(); }
  bool empty() const noexcept { return tones_.empty(); }
  double total_power() const noexcept;
  /// Frequency of the strongest tone; nullopt for an empty set.
  std::optional<double> peak_frequency() const noexcept;

 private:
  std::vector<Tone> tones_;
};

/// Q depth snapshots (rows) of the N sparse slow-time samples (columns).
class SlowTimeSnapshots {
 public:
  SlowTimeSnapshots(EmissionPattern pattern, ComplexMatrix data, double noise_power);

  const EmissionPattern& pattern() const noexcept { return pattern_; }
  const ComplexMatrix& data() const noexcept { return data_; }
  int snapshot_count() const noexcept { return static_cast<int>(data_.rows()); }
  double noise_power() const noexcept { return noise_power_; }

 private:
  EmissionPattern pattern_;
  ComplexMatrix data_;
  double noise_power_;
};

/// Draws y_k[n] = sum_m a_{m,k} exp(2 pi j nu_m (p_n - 1)) + w_k[n] with
/// independent circular complex Gaussian amplitudes per snapshot and white
/// noise of variance `noise_power`. Deterministic in `seed`.
SlowTimeSnapshots generate_snapshots(const ToneSet& tones, const EmissionPattern& pattern,
                                     int snapshot_count, double noise_power,
                                     std::uint64_t seed);

/// Infinite-snapshot covariance A diag(p) A^H + noise_power * I over the
/// pattern's slots.
ComplexMatrix analytic_covariance(const ToneSet& tones, const EmissionPattern& pattern,
                                  double noise_power);

/// Noise variance that gives `snr_db` = 10 log10(signal_power / noise).
double noise_power_for_snr(double signal_power, double snr_db);

/// Near-DC clutter added on top of a frame's blood tones.
struct ClutterSpec {
  double frequency = 0.0;
  /// Clutter power relative to the frame's total blood power.
  double relative_db = 40.0;
};

/// Time-varying spectral content: one stationary ToneSet per frame.
struct PulsatileProfile {
  std::vector<ToneSet> frames;
  /// Either empty, one entry applied to every frame, or one per frame.
  std::vector<ClutterSpec> clutter;
  int cpis_per_frame = 1;

  void validate() const;
  /// Frame tones plus clutter, ready for generation.
  ToneSet frame_tones(std::size_t frame) const;
};

/// Parameters of a synthetic pulsatile flow profile whose peak frequency
/// follows center + swing * sin(2 pi t / period), with a cluster of
/// weaker tones trailing towards zero to mimic a velocity distribution.
struct SinusoidalProfileSpec {
  int frames = 64;
  double center = 0.15;
  double swing = 0.12;
  double period_frames = 32.0;
  int tones_per_frame = 4;
  /// Spacing between the tones of one frame (normalized frequency).
  double tone_spacing = 0.02;
  /// Power ratio between consecutive tones, peak tone first.
  double tone_decay = 0.5;
  double peak_power = 1.0;
  std::optional<ClutterSpec> clutter;
};

PulsatileProfile sinusoidal_profile(const SinusoidalProfileSpec& spec);

/// One SlowTimeSnapshots per frame; frame f uses seed + f.
std::vector<SlowTimeSnapshots> generate_pulsatile(const PulsatileProfile& profile,
                                                  const EmissionPattern& pattern,
                                                  int snapshot_count, double noise_power,
                                                  std::uint64_t seed);

}  // namespace nestdop
