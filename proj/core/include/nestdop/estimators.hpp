#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nestdop/coarray.hpp"
#include "nestdop/filters.hpp"
#include "nestdop/signal_model.hpp"
#include "nestdop/types.hpp"

namespace nestdop {

/// Power on a uniform frequency grid of n bins, stored centered: bin c has
/// normalized frequency (c - floor(n/2)) / n, so every bin lies in
/// [-1/2, 1/2) and frequency zero sits at c = floor(n/2).
class GridSpectrum {
 public:
  explicit GridSpectrum(std::vector<double> powers);

  std::size_t size() const noexcept { return powers_.size(); }
  const std::vector<double>& powers() const noexcept { return powers_; }
  double operator[](std::size_t bin) const { return powers_[bin]; }

  double frequency(std::size_t bin) const;
  /// Centered bin nearest to `nu` (wrapped).
  std::size_t bin_of(double nu) const;
  std::size_t peak_bin() const;
  double peak_frequency() const { return frequency(peak_bin()); }
  double total_power() const;

 private:
  std::vector<double> powers_;
};

struct SpectralLine {
  double frequency = 0.0;
  double power = 0.0;
};

/// Gridless estimate: M lines sorted by frequency.
struct LineSpectrum {
  std::vector<SpectralLine> lines;
  int model_order = 0;
  double noise_estimate = 0.0;

  /// Strongest line; nullopt when empty.
  std::optional<SpectralLine> peak() const;
  /// Adds each line's (nonnegative) power to the nearest of 2P-1 bins.
  GridSpectrum rasterize(int window_size) const;
};

/// Discrete recovery: scaled DFT of z over the 2P-1 lag grid followed by
/// soft thresholding max(Re - lambda, 0).
GridSpectrum nest(const CoarraySignal& z, double lambda);

struct NespritOptions {
  /// Eigenvalue soft threshold: M counts eigenvalues above it.
  double lambda = 0.0;
  /// Overrides the threshold rule when set.
  std::optional<int> model_order;
  /// Subtract the noise-floor estimate from z(0) before the power fit.
  bool subtract_noise_floor = true;
  /// Relative singular-value cutoff for the pseudo-inverses.
  double rcond = 1e-10;
};

/// Gridless recovery: ESPRIT on the Toeplitz matrix built from z, then a
/// least-squares power fit against the lag-domain Vandermonde matrix.
LineSpectrum nesprit(const CoarraySignal& z, const NespritOptions& options);
inline LineSpectrum nesprit(const CoarraySignal& z, double lambda) {
  NespritOptions options;
  options.lambda = lambda;
  return nesprit(z, options);
}

/// Mean of the trailing size() - M eigenvalues (descending input), clamped
/// at zero.
double estimate_noise_floor(std::span<const double> eigenvalues, int model_order);

struct WelchOptions {
  /// 0 selects one segment spanning the whole window.
  int segment_length = 0;
  /// Fractional overlap between consecutive segments, in [0, 1).
  double overlap = 0.0;
  WindowKind window = WindowKind::rectangular;
};

/// Averaged modified periodogram over snapshot rows and segments of
/// uniformly sampled data (Q x P). Each periodogram is |DFT(w x)|^2 / sum w^2,
/// so white noise of variance s^2 gives a flat spectrum of mean s^2.
GridSpectrum welch(const ComplexMatrix& uniform, const WelchOptions& options);

/// P-column matrix with each snapshot placed at its slots and zeros
/// elsewhere. Slots beyond the window are dropped.
ComplexMatrix zero_filled(const SlowTimeSnapshots& snapshots);

/// Welch on pattern data. Non-uniform patterns are rejected unless
/// `zero_fill` is set, in which case unused slots are filled with zeros and
/// the result is scaled by P/N to compensate for the missing samples.
GridSpectrum welch(const SlowTimeSnapshots& snapshots, const WelchOptions& options,
                   bool zero_fill = false);

/// 10 log10(p / max p), clipped below at `floor_db`.
std::vector<double> to_db(std::span<const double> powers, double floor_db = -60.0);

}  // namespace nestdop
