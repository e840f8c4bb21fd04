#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestdop/estimators.hpp"

namespace nestdop {

struct SpectrogramMetadata {
  std::string estimator;
  std::string pattern;     ///< pattern JSON
  std::string processing;  ///< free-form description of filter/apodization
  int window_size = 0;
};

struct SpectrogramFrame {
  int timestamp = 0;  ///< CPI index of the frame start
  std::vector<double> powers;
};

/// Time-ordered spectra sharing one centered frequency grid.
class Spectrogram {
 public:
  Spectrogram(std::size_t bins, SpectrogramMetadata metadata);

  /// Appends a frame; timestamps must increase and the grid must match.
  void append(int timestamp, const GridSpectrum& spectrum);

  std::size_t bins() const noexcept { return bins_; }
  std::size_t frame_count() const noexcept { return frames_.size(); }
  const std::vector<SpectrogramFrame>& frames() const noexcept { return frames_; }
  const SpectrogramMetadata& metadata() const noexcept { return metadata_; }
  double frequency(std::size_t bin) const;
  GridSpectrum frame_spectrum(std::size_t frame) const { return GridSpectrum(frames_.at(frame).powers); }

  /// Peak frequency of each frame.
  std::vector<double> ridge() const;

 private:
  std::size_t bins_;
  SpectrogramMetadata metadata_;
  std::vector<SpectrogramFrame> frames_;
};

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  ///< row-major, row 0 at the top

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// dB image of a spectrogram relative to its global maximum: 0 dB maps to
/// 255, `floor_db` and below to 0. Columns are frames; rows are frequency
/// bins with the highest frequency on top and zero in the middle.
GrayImage render(const Spectrogram& spectrogram, double floor_db = -60.0);

/// dB values (relative to the global maximum, clipped at floor_db) laid
/// out like render(): result[row][col].
std::vector<std::vector<double>> spectrogram_db(const Spectrogram& spectrogram,
                                                double floor_db = -60.0);

}  // namespace nestdop
