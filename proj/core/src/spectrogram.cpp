#include "nestdop/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nestdop/error.hpp"

namespace nestdop {
namespace {
constexpr std::string_view kModule = "experiments_cli";
}

Spectrogram::Spectrogram(std::size_t bins, SpectrogramMetadata metadata)
    : bins_(bins), metadata_(std::move(metadata)) {
  if (bins_ == 0) throw_precondition(kModule, "spectrogram needs at least one frequency bin");
}

void Spectrogram::append(int timestamp, const GridSpectrum& spectrum) {
  if (spectrum.size() != bins_) {
    throw_precondition(kModule, "spectrogram frame has " + std::to_string(spectrum.size()) +
                                    " bins, expected " + std::to_string(bins_));
  }
  if (!frames_.empty() && timestamp <= frames_.back().timestamp)
    throw_precondition(kModule, "spectrogram timestamps must be strictly increasing");
  frames_.push_back({timestamp, spectrum.powers()});
}

double Spectrogram::frequency(std::size_t bin) const {
  return static_cast<double>(static_cast<long long>(bin) - static_cast<long long>(bins_ / 2)) /
         static_cast<double>(bins_);
}

std::vector<double> Spectrogram::ridge() const {
  std::vector<double> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) {
    const auto peak = std::max_element(f.powers.begin(), f.powers.end()) - f.powers.begin();
    out.push_back(frequency(static_cast<std::size_t>(peak)));
  }
  return out;
}

std::vector<std::vector<double>> spectrogram_db(const Spectrogram& spectrogram, double floor_db) {
  double peak = 0.0;
  for (const auto& f : spectrogram.frames()) {
    for (double v : f.powers) peak = std::max(peak, v);
  }
  const std::size_t height = spectrogram.bins();
  const std::size_t width = spectrogram.frame_count();
  std::vector<std::vector<double>> db(height, std::vector<double>(width, floor_db));
  if (!(peak > 0.0)) return db;
  for (std::size_t col = 0; col < width; ++col) {
    const auto& powers = spectrogram.frames()[col].powers;
    for (std::size_t bin = 0; bin < height; ++bin) {
      const double v = powers[bin];
      db[height - 1 - bin][col] =
          v > 0.0 ? std::max(floor_db, 10.0 * std::log10(v / peak)) : floor_db;
    }
  }
  return db;
}

GrayImage render(const Spectrogram& spectrogram, double floor_db) {
  if (!(floor_db < 0.0)) throw_precondition(kModule, "display floor must be negative dB");
  const auto db = spectrogram_db(spectrogram, floor_db);
  GrayImage image;
  image.height = spectrogram.bins();
  image.width = spectrogram.frame_count();
  image.pixels.resize(image.width * image.height);
  for (std::size_t row = 0; row < image.height; ++row) {
    for (std::size_t col = 0; col < image.width; ++col) {
      const double level = (db[row][col] - floor_db) / -floor_db;
      image.pixels[row * image.width + col] =
          static_cast<std::uint8_t>(std::lround(std::clamp(level, 0.0, 1.0) * 255.0));
    }
  }
  return image;
}

}  // namespace nestdop
