#include "nestdop/serialization.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "nestdop/error.hpp"

namespace nestdop {
namespace {

using json = nlohmann::json;
constexpr std::string_view kModule = "serialization";
constexpr std::array<char, 4> kMagic{'N', 'S', 'T', 'S'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error(ErrorKind::io, std::string(kModule), "truncated snapshot file");
  return value;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw_config(kModule, std::string("invalid JSON: ") + e.what());
  }
}

json params_json(const EmissionPattern& pattern) {
  const auto p = pattern.params();
  switch (pattern.family()) {
    case PatternFamily::nested:
    case PatternFamily::super_nested:
    case PatternFamily::coprime:
      if (p.size() == 2) return {{"N1", p[0]}, {"N2", p[1]}};
      break;
    case PatternFamily::k_level:
      return {{"levels", std::vector<int>(p.begin(), p.end())}};
    case PatternFamily::standard:
      break;
  }
  return json::object();
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return buf.data();
}

std::string pattern_to_json(const EmissionPattern& pattern) {
  json j;
  j["P"] = pattern.window_size();
  j["family"] = std::string(to_string(pattern.family()));
  j["slots"] = std::vector<int>(pattern.slots().begin(), pattern.slots().end());
  j["params"] = params_json(pattern);
  return j.dump();
}

EmissionPattern pattern_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    const auto family = parse_family(j.at("family").get<std::string>());
    std::vector<int> params;
    if (j.contains("params")) {
      const auto& pj = j["params"];
      if (pj.contains("levels")) params = pj["levels"].get<std::vector<int>>();
      else if (pj.contains("N1")) params = {pj["N1"].get<int>(), pj["N2"].get<int>()};
    }
    return EmissionPattern(j.at("P").get<int>(), j.at("slots").get<std::vector<int>>(), family,
                           std::move(params));
  } catch (const json::exception& e) {
    throw_config(kModule, std::string("malformed pattern JSON: ") + e.what());
  }
}

void write_snapshots_binary(const SlowTimeSnapshots& snapshots, std::ostream& out) {
  const auto& pattern = snapshots.pattern();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(pattern.family()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(pattern.window_size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(pattern.size()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(snapshots.snapshot_count()));
  put<double>(out, snapshots.noise_power());
  for (int slot : pattern.slots()) put<std::int32_t>(out, slot);
  const auto& data = snapshots.data();
  for (Eigen::Index k = 0; k < data.rows(); ++k) {
    for (Eigen::Index n = 0; n < data.cols(); ++n) {
      put<double>(out, data(k, n).real());
      put<double>(out, data(k, n).imag());
    }
  }
  if (!out) throw Error(ErrorKind::io, std::string(kModule), "failed writing snapshot file");
}

SlowTimeSnapshots read_snapshots_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic)
    throw Error(ErrorKind::io, std::string(kModule), "not a snapshot container (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw Error(ErrorKind::io, std::string(kModule),
                "unsupported snapshot container version " + std::to_string(version));
  }
  const auto family_code = get<std::uint32_t>(in);
  const auto p = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto q = get<std::uint64_t>(in);
  const auto noise = get<double>(in);
  std::vector<int> slots(n);
  for (auto& s : slots) s = get<std::int32_t>(in);

  if (family_code > static_cast<std::uint32_t>(PatternFamily::k_level))
    throw Error(ErrorKind::io, std::string(kModule), "unknown pattern family code");
  EmissionPattern pattern(static_cast<int>(p), std::move(slots),
                          static_cast<PatternFamily>(family_code));
  ComplexMatrix data(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < data.rows(); ++k) {
    for (Eigen::Index i = 0; i < data.cols(); ++i) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      data(k, i) = Complex(re, im);
    }
  }
  return SlowTimeSnapshots(std::move(pattern), std::move(data), noise);
}

void write_snapshots_csv(const SlowTimeSnapshots& snapshots, std::ostream& out) {
  out << "snapshot,slot,re,im\n";
  const auto slots = snapshots.pattern().slots();
  const auto& data = snapshots.data();
  for (Eigen::Index k = 0; k < data.rows(); ++k) {
    for (Eigen::Index n = 0; n < data.cols(); ++n) {
      out << k << ',' << slots[static_cast<std::size_t>(n)] << ',' << format_double(data(k, n).real())
          << ',' << format_double(data(k, n).imag()) << '\n';
    }
  }
}

void write_coarray_csv(const CoarraySignal& z, std::ostream& out) {
  out << "lag,re,im\n";
  for (int lag = -z.max_lag(); lag <= z.max_lag(); ++lag) {
    out << lag << ',' << format_double(z(lag).real()) << ',' << format_double(z(lag).imag())
        << '\n';
  }
}

std::string coarray_to_json(const CoarraySignal& z) {
  json j;
  j["P"] = z.window_size();
  std::vector<int> lags;
  std::vector<double> re, im;
  for (int lag = -z.max_lag(); lag <= z.max_lag(); ++lag) {
    lags.push_back(lag);
    re.push_back(z(lag).real());
    im.push_back(z(lag).imag());
  }
  j["lags"] = lags;
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

CoarraySignal coarray_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    const int p = j.at("P").get<int>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw_config(kModule, "coarray re/im lengths differ");
    ComplexVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    return CoarraySignal(p, std::move(v));
  } catch (const json::exception& e) {
    throw_config(kModule, std::string("malformed coarray JSON: ") + e.what());
  }
}

void write_spectrum_csv(const GridSpectrum& spectrum, std::ostream& out) {
  out << "bin,frequency,power\n";
  for (std::size_t b = 0; b < spectrum.size(); ++b) {
    out << b << ',' << format_double(spectrum.frequency(b)) << ',' << format_double(spectrum[b])
        << '\n';
  }
}

std::string spectrum_to_json(const GridSpectrum& spectrum) {
  json j;
  std::vector<double> freqs;
  for (std::size_t b = 0; b < spectrum.size(); ++b) freqs.push_back(spectrum.frequency(b));
  j["bins"] = spectrum.size();
  j["frequency"] = freqs;
  j["power"] = spectrum.powers();
  return j.dump();
}

void write_lines_csv(const LineSpectrum& lines, std::ostream& out) {
  out << "frequency,power\n";
  for (const auto& l : lines.lines)
    out << format_double(l.frequency) << ',' << format_double(l.power) << '\n';
}

std::string lines_to_json(const LineSpectrum& lines) {
  json j;
  j["model_order"] = lines.model_order;
  j["noise_estimate"] = lines.noise_estimate;
  json arr = json::array();
  for (const auto& l : lines.lines) arr.push_back({{"frequency", l.frequency}, {"power", l.power}});
  j["lines"] = arr;
  return j.dump();
}

void write_spectrogram_csv(const Spectrogram& spectrogram, std::ostream& out) {
  out << "frame,timestamp,bin,frequency,power\n";
  for (std::size_t f = 0; f < spectrogram.frame_count(); ++f) {
    const auto& frame = spectrogram.frames()[f];
    for (std::size_t b = 0; b < spectrogram.bins(); ++b) {
      out << f << ',' << frame.timestamp << ',' << b << ','
          << format_double(spectrogram.frequency(b)) << ',' << format_double(frame.powers[b])
          << '\n';
    }
  }
}

void write_pgm(const GrayImage& image, std::ostream& out) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw Error(ErrorKind::io, std::string(kModule), "failed writing PGM image");
}

std::string profile_to_json(const PulsatileProfile& profile) {
  json j;
  j["cpis_per_frame"] = profile.cpis_per_frame;
  json frames = json::array();
  for (const auto& f : profile.frames) {
    json tones = json::array();
    for (const auto& t : f.tones()) tones.push_back({{"frequency", t.frequency}, {"power", t.power}});
    frames.push_back(tones);
  }
  j["frames"] = frames;
  json clutter = json::array();
  for (const auto& c : profile.clutter)
    clutter.push_back({{"frequency", c.frequency}, {"relative_db", c.relative_db}});
  j["clutter"] = clutter;
  return j.dump();
}

PulsatileProfile profile_from_json(std::string_view text) {
  const json j = parse(text);
  PulsatileProfile profile;
  try {
    profile.cpis_per_frame = j.value("cpis_per_frame", 1);
    for (const auto& f : j.at("frames")) {
      std::vector<Tone> tones;
      for (const auto& t : f) tones.push_back({t.at("frequency").get<double>(), t.at("power").get<double>()});
      profile.frames.emplace_back(std::move(tones));
    }
    if (j.contains("clutter")) {
      for (const auto& c : j["clutter"])
        profile.clutter.push_back({c.at("frequency").get<double>(), c.at("relative_db").get<double>()});
    }
  } catch (const json::exception& e) {
    throw_config(kModule, std::string("malformed profile JSON: ") + e.what());
  }
  profile.validate();
  return profile;
}

}  // namespace nestdop
