#include "nestdop/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nestdop/error.hpp"
#include "nestdop/parallel.hpp"
#include "nestdop/serialization.hpp"

namespace nestdop {
namespace {

constexpr std::string_view kModule = "experiments_cli";
using json = nlohmann::json;

GridSpectrum expected_periodogram(const ComplexMatrix& uniform_cov) {
  // E|DFT(x)|^2 / P = e_k^H R e_k / P with e_k(n) = exp(j 2 pi k n / P).
  const auto p = static_cast<int>(uniform_cov.rows());
  std::vector<double> out(static_cast<std::size_t>(p));
  ComplexVector e(p);
  for (int k = 0; k < p; ++k) {
    for (int n = 0; n < p; ++n) e(n) = std::polar(1.0, kTwoPi * k * n / p);
    const double v = (e.adjoint() * uniform_cov * e)(0, 0).real() / p;
    out[static_cast<std::size_t>((k + p / 2) % p)] = v;
  }
  return GridSpectrum(std::move(out));
}

}  // namespace

std::string_view to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::nest: return "nest";
    case Estimator::nesprit: return "nesprit";
    case Estimator::welch: return "welch";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  for (auto e : {Estimator::nest, Estimator::nesprit, Estimator::welch}) {
    if (to_string(e) == name) return e;
  }
  throw_config(kModule, "unknown estimator '" + std::string(name) +
                            "' (expected nest, nesprit or welch)");
}

std::string ProcessingConfig::describe() const {
  std::ostringstream os;
  os << "remove_mean=" << (remove_mean ? "true" : "false") << ";filter=";
  if (!clutter_filter) {
    os << "none";
  } else if (const auto* fir = std::get_if<FirFilter>(&*clutter_filter)) {
    os << "fir(" << fir->taps.size() << " taps)";
  } else {
    const auto& iir = std::get<IirFilter>(*clutter_filter);
    os << "iir(order " << iir.a.size() - 1 << ")";
  }
  os << ";apodization=" << (apodization ? to_string(*apodization) : "none");
  return os.str();
}

CoarraySignal process_coarray(const CovarianceEstimate& cov, const EmissionPattern& pattern,
                              const ProcessingConfig& processing) {
  CoarraySignal z = lag_average(cov, pattern);
  if (processing.clutter_filter) z = clutter_filter(z, *processing.clutter_filter);
  if (processing.apodization) {
    const auto window = make_window(*processing.apodization,
                                    static_cast<std::size_t>(pattern.window_size()));
    z = apodize(z, window);
  }
  return z;
}

CoarraySignal process_coarray(const SlowTimeSnapshots& snapshots,
                              const ProcessingConfig& processing) {
  return process_coarray(estimate_covariance(snapshots, processing.remove_mean),
                         snapshots.pattern(), processing);
}

ComplexMatrix filter_rows(const ComplexMatrix& uniform, const ClutterFilter& filter) {
  ComplexMatrix out(uniform.rows(), uniform.cols());
  const Eigen::Index len = uniform.cols();
  if (const auto* fir = std::get_if<FirFilter>(&filter)) {
    for (Eigen::Index r = 0; r < uniform.rows(); ++r) {
      for (Eigen::Index n = 0; n < len; ++n) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < fir->taps.size() && static_cast<Eigen::Index>(k) <= n; ++k)
          acc += fir->taps[k] * uniform(r, n - static_cast<Eigen::Index>(k));
        out(r, n) = acc;
      }
    }
    return out;
  }
  const auto& iir = std::get<IirFilter>(filter);
  if (!is_stable(iir)) throw_precondition("coarray", "IIR clutter filter is unstable");
  for (Eigen::Index r = 0; r < uniform.rows(); ++r) {
    for (Eigen::Index n = 0; n < len; ++n) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < iir.b.size() && static_cast<Eigen::Index>(k) <= n; ++k)
        acc += iir.b[k] * uniform(r, n - static_cast<Eigen::Index>(k));
      for (std::size_t k = 1; k < iir.a.size() && static_cast<Eigen::Index>(k) <= n; ++k)
        acc -= iir.a[k] * out(r, n - static_cast<Eigen::Index>(k));
      out(r, n) = acc / iir.a.front();
    }
  }
  return out;
}

GridSpectrum estimate_frame(const SlowTimeSnapshots& snapshots, Estimator estimator,
                            const ProcessingConfig& processing,
                            const EstimatorSettings& settings) {
  const auto& pattern = snapshots.pattern();
  switch (estimator) {
    case Estimator::nest:
      return nest(process_coarray(snapshots, processing), settings.nest_lambda);
    case Estimator::nesprit:
      return nesprit(process_coarray(snapshots, processing), settings.nesprit)
          .rasterize(pattern.window_size());
    case Estimator::welch:
      break;
  }

  ComplexMatrix data = snapshots.data();
  if (processing.remove_mean) {
    if (snapshots.snapshot_count() < 2)
      throw_precondition("coarray", "mean removal needs at least Q = 2 snapshots");
    const Eigen::RowVectorXcd mean = data.colwise().mean();
    data.rowwise() -= mean;
  }
  const SlowTimeSnapshots prepared(pattern, std::move(data), snapshots.noise_power());
  if (!processing.clutter_filter) return welch(prepared, settings.welch, settings.welch_zero_fill);
  if (!pattern.is_uniform() && !settings.welch_zero_fill)
    return welch(prepared, settings.welch, false);  // raises the uniform-sampling error

  const auto used = std::count_if(pattern.slots().begin(), pattern.slots().end(),
                                  [&](int s) { return s <= pattern.window_size(); });
  const auto spectrum =
      welch(filter_rows(zero_filled(prepared), *processing.clutter_filter), settings.welch);
  std::vector<double> powers = spectrum.powers();
  for (double& v : powers) v *= static_cast<double>(pattern.window_size()) / static_cast<double>(used);
  return GridSpectrum(std::move(powers));
}

Spectrogram run_spectrogram(const std::vector<SlowTimeSnapshots>& frames, Estimator estimator,
                            const ProcessingConfig& processing,
                            const EstimatorSettings& settings, int cpis_per_frame) {
  if (frames.empty()) throw_precondition(kModule, "spectrogram needs at least one frame");
  const auto& pattern = frames.front().pattern();
  if (estimator != Estimator::welch && !verify_contiguous_coarray(pattern)) {
    // Surface the missing-lag diagnostics before spawning work.
    const auto missing = difference_set(pattern).missing_lags(pattern.window_size());
    std::ostringstream os;
    os << "pattern '" << to_string(pattern.family()) << "' cannot drive "
       << to_string(estimator) << ": coarray has " << missing.size()
       << " missing lags (first: ";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 8); ++i)
      os << (i ? ", " : "") << missing[i];
    os << ")";
    throw_precondition("coarray", os.str());
  }

  std::vector<std::optional<GridSpectrum>> spectra(frames.size());
  parallel_for(frames.size(), [&](std::size_t f) {
    spectra[f] = estimate_frame(frames[f], estimator, processing, settings);
  });

  SpectrogramMetadata meta{std::string(to_string(estimator)), pattern_to_json(pattern),
                           processing.describe(), pattern.window_size()};
  Spectrogram out(spectra.front()->size(), std::move(meta));
  for (std::size_t f = 0; f < spectra.size(); ++f)
    out.append(static_cast<int>(f) * cpis_per_frame, *spectra[f]);
  return out;
}

RidgeStats ridge_stats(const Spectrogram& spectrogram, const std::vector<double>& truth,
                       int window_size, double tolerance_bins) {
  if (truth.size() != spectrogram.frame_count())
    throw_precondition(kModule, "ground truth length does not match the frame count");
  const auto ridge = spectrogram.ridge();
  const double bin = 1.0 / (2.0 * window_size - 1.0);
  RidgeStats stats;
  int hits = 0;
  for (std::size_t f = 0; f < ridge.size(); ++f) {
    const double err = std::abs(wrap_frequency(ridge[f] - truth[f])) / bin;
    stats.mean_error_bins += err;
    stats.max_error_bins = std::max(stats.max_error_bins, err);
    if (err <= tolerance_bins + 1e-9) ++hits;
  }
  if (!ridge.empty()) {
    stats.mean_error_bins /= static_cast<double>(ridge.size());
    stats.hit_rate = static_cast<double>(hits) / static_cast<double>(ridge.size());
  }
  return stats;
}

double artifact_energy_db(const Spectrogram& spectrogram, const PulsatileProfile& truth,
                          double halfwidth) {
  if (truth.frames.size() != spectrogram.frame_count())
    throw_precondition(kModule, "profile frame count does not match the spectrogram");
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t f = 0; f < spectrogram.frame_count(); ++f) {
    const auto& powers = spectrogram.frames()[f].powers;
    for (std::size_t b = 0; b < powers.size(); ++b) {
      const double nu = spectrogram.frequency(b);
      const bool inside = std::any_of(
          truth.frames[f].tones().begin(), truth.frames[f].tones().end(),
          [&](const Tone& t) { return std::abs(wrap_frequency(nu - t.frequency)) <= halfwidth; });
      total += powers[b];
      if (!inside) outside += powers[b];
    }
  }
  if (!(total > 0.0)) return 0.0;
  return 10.0 * std::log10(std::max(outside / total, 1e-300));
}

std::vector<MseRow> run_mse(const MseConfig& config) {
  if (config.trials < 1) throw_precondition(kModule, "MSE sweep needs at least one trial");
  const auto nested = build_nested(config.n1, config.n2);
  const auto uniform = standard_pattern(nested.window_size());
  const ToneSet tone({{config.frequency, 1.0}});
  const ProcessingConfig processing{config.remove_mean, std::nullopt, std::nullopt};
  NespritOptions nesprit_options;
  nesprit_options.lambda = config.nesprit_lambda;
  nesprit_options.model_order = config.nesprit_order;

  auto nesprit_peak = [&](const CoarraySignal& z) {
    const auto lines = nesprit(z, nesprit_options);
    const auto peak = lines.peak();
    return peak ? peak->frequency : 0.0;
  };
  auto sq = [&](double estimate) {
    const double d = wrap_frequency(estimate - config.frequency);
    return d * d;
  };

  std::vector<MseRow> rows;
  for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
    const double noise = noise_power_for_snr(1.0, config.snr_db[s]);
    const int trials = config.analytic ? 1 : config.trials;
    std::vector<std::array<double, 3>> errors(static_cast<std::size_t>(trials));

    if (config.analytic) {
      const auto z = process_coarray(CovarianceEstimate::exact(analytic_covariance(tone, nested, noise)),
                                     nested, ProcessingConfig{false, std::nullopt, std::nullopt});
      const auto welch_spec = expected_periodogram(analytic_covariance(tone, uniform, noise));
      errors[0] = {sq(nest(z, config.nest_lambda).peak_frequency()), sq(nesprit_peak(z)),
                   sq(welch_spec.peak_frequency())};
    } else {
      parallel_for(errors.size(), [&](std::size_t t) {
        const std::uint64_t base = config.seed * 1'000'003ULL + s * 10'000'019ULL + 2 * t;
        const auto sparse = generate_snapshots(tone, nested, config.snapshots, noise, base);
        const auto full = generate_snapshots(tone, uniform, config.snapshots, noise, base + 1);
        const auto z = process_coarray(sparse, processing);
        const auto welch_spec = estimate_frame(full, Estimator::welch, processing, {});
        errors[t] = {sq(nest(z, config.nest_lambda).peak_frequency()), sq(nesprit_peak(z)),
                     sq(welch_spec.peak_frequency())};
      });
    }

    for (int e = 0; e < 3; ++e) {
      double sum = 0.0;
      for (const auto& err : errors) sum += err[static_cast<std::size_t>(e)];
      rows.push_back({config.snr_db[s], static_cast<Estimator>(e), sum / trials, trials});
    }
  }
  return rows;
}

const EstimatorReport* CompareReport::find(Estimator e) const {
  for (const auto& r : estimators) {
    if (r.estimator == e) return &r;
  }
  return nullptr;
}

CompareReport run_compare(const std::vector<SlowTimeSnapshots>& frames,
                          const PulsatileProfile& truth, const std::vector<Estimator>& estimators,
                          const ProcessingConfig& processing, const EstimatorSettings& settings,
                          double support_halfwidth) {
  if (frames.empty()) throw_precondition(kModule, "comparison needs at least one frame");
  const int p = frames.front().pattern().window_size();
  std::vector<double> peaks;
  for (const auto& f : truth.frames) peaks.push_back(f.peak_frequency().value_or(0.0));

  CompareReport report;
  for (auto e : estimators) {
    EstimatorSettings local = settings;
    if (e == Estimator::welch) local.welch_zero_fill = true;
    auto spec = run_spectrogram(frames, e, processing, local, truth.cpis_per_frame);
    const auto ridge = ridge_stats(spec, peaks, p);
    const double artifact = artifact_energy_db(spec, truth, support_halfwidth);
    report.estimators.push_back({e, std::move(spec), ridge, artifact});
  }
  return report;
}

double velocity_to_frequency(double axial_velocity, const PhysicalUnits& units) {
  return -2.0 * axial_velocity * units.center_frequency / units.sound_speed / units.prf;
}

double frequency_to_velocity(double nu, const PhysicalUnits& units) {
  return -nu * units.prf * units.sound_speed / (2.0 * units.center_frequency);
}

EmissionPattern build_pattern(const PatternSpec& spec, int window_size) {
  switch (spec.family) {
    case PatternFamily::standard:
      return standard_pattern(window_size);
    case PatternFamily::nested: {
      if (spec.optimal) {
        const auto opt = optimal_nested(window_size, spec.preference);
        return build_nested(opt.n1, opt.n2);
      }
      return build_nested(spec.n1, spec.n2);
    }
    case PatternFamily::super_nested: {
      if (spec.optimal) {
        const auto opt = optimal_nested(window_size, spec.preference);
        return build_super_nested(opt.n1, opt.n2);
      }
      return build_super_nested(spec.n1, spec.n2);
    }
    case PatternFamily::coprime: {
      if (!spec.optimal) return build_coprime(spec.n1, spec.n2);
      // Smallest co-prime pair with N1*N2 = P-1.
      std::optional<std::pair<int, int>> best;
      const int target = window_size - 1;
      for (int a = 1; a * a < target; ++a) {
        if (target % a != 0 || std::gcd(a, target / a) != 1) continue;
        const int size = 2 * a + target / a - 1;
        if (!best || size < 2 * best->first + best->second - 1) best = {a, target / a};
      }
      if (!best) {
        throw_precondition("array_design", "no co-prime pair N1 < N2 with N1*N2 = P-1 = " +
                                               std::to_string(target));
      }
      return build_coprime(best->first, best->second);
    }
    case PatternFamily::k_level: {
      if (spec.optimal) return build_klevel(optimal_klevel(window_size), window_size);
      return build_klevel(KLevelParams{spec.levels});
    }
  }
  throw_config(kModule, "unhandled pattern family");
}

double ExperimentConfig::noise_for(double signal_power) const {
  if (noise_power) return *noise_power;
  return noise_power_for_snr(signal_power, snr_db);
}

bool ExperimentConfig::has(std::string_view key) const {
  return std::find(present.begin(), present.end(), key) != present.end();
}

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw_config(kModule, std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw_config(kModule, "unknown field '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T field(const json& j, const char* key, T fallback, std::string_view where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw_config(kModule, "field '" + std::string(key) + "' in " + std::string(where) +
                              " has the wrong type");
  }
}

ClutterFilter parse_filter(const json& j) {
  check_keys(j, "filter", {"type", "order", "cutoff", "taps", "b", "a"});
  const auto type = field<std::string>(j, "type", "", "filter");
  if (type == "butterworth_highpass") {
    const int order = field<int>(j, "order", 4, "filter");
    const double cutoff = field<double>(j, "cutoff", 0.03, "filter");
    if (order < 1 || !(cutoff > 0.0 && cutoff < 0.5))
      throw_config(kModule, "filter needs order >= 1 and 0 < cutoff < 0.5");
    return butterworth_highpass(order, cutoff);
  }
  if (type == "fir") {
    const auto taps = field<std::vector<double>>(j, "taps", {}, "filter");
    if (taps.empty()) throw_config(kModule, "FIR filter needs a non-empty 'taps' list");
    return FirFilter{{taps.begin(), taps.end()}};
  }
  if (type == "iir") {
    IirFilter f{field<std::vector<double>>(j, "b", {}, "filter"),
                field<std::vector<double>>(j, "a", {}, "filter")};
    if (f.b.empty() || f.a.empty() || f.a.front() == 0.0)
      throw_config(kModule, "IIR filter needs non-empty 'b' and 'a' with a[0] != 0");
    return f;
  }
  throw_config(kModule, "filter type must be butterworth_highpass, fir or iir");
}

PulsatileProfile parse_profile(const json& j, const std::string& base_dir) {
  if (j.contains("file")) {
    check_keys(j, "profile", {"file"});
    auto path = std::filesystem::path(j["file"].get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, std::string(kModule), "cannot open profile " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return profile_from_json(buf.str());
  }
  check_keys(j, "profile", {"type", "frames", "center", "swing", "period_frames",
                            "tones_per_frame", "tone_spacing", "tone_decay", "peak_power",
                            "clutter"});
  if (field<std::string>(j, "type", "sinusoidal", "profile") != "sinusoidal")
    throw_config(kModule, "profile type must be 'sinusoidal' (or give 'file')");
  SinusoidalProfileSpec spec;
  spec.frames = field(j, "frames", spec.frames, "profile");
  spec.center = field(j, "center", spec.center, "profile");
  spec.swing = field(j, "swing", spec.swing, "profile");
  spec.period_frames = field(j, "period_frames", spec.period_frames, "profile");
  spec.tones_per_frame = field(j, "tones_per_frame", spec.tones_per_frame, "profile");
  spec.tone_spacing = field(j, "tone_spacing", spec.tone_spacing, "profile");
  spec.tone_decay = field(j, "tone_decay", spec.tone_decay, "profile");
  spec.peak_power = field(j, "peak_power", spec.peak_power, "profile");
  if (j.contains("clutter")) {
    const auto& c = j["clutter"];
    check_keys(c, "profile.clutter", {"frequency", "relative_db"});
    spec.clutter = ClutterSpec{field(c, "frequency", 0.005, "profile.clutter"),
                               field(c, "relative_db", 40.0, "profile.clutter")};
  }
  if (std::abs(spec.center) + std::abs(spec.swing) +
          spec.tone_spacing * (spec.tones_per_frame - 1) >= 0.5) {
    throw_config(kModule, "profile frequencies (center, swing, spacing) exceed |nu| < 1/2");
  }
  return sinusoidal_profile(spec);
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw_config(kModule, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"P", "pattern", "units", "tones", "profile", "snapshots", "snr_db",
                           "noise_power", "snr_list", "trials", "analytic", "remove_mean",
                           "filter", "apodization", "lambda", "nesprit", "welch", "estimators",
                           "support_halfwidth", "seed", "output"});
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) cfg.present.push_back(key);
  cfg.window_size = field(j, "P", cfg.window_size, "config");
  if (cfg.window_size < 2) throw_config(kModule, "P must be >= 2");

  if (j.contains("pattern")) {
    const auto& pj = j["pattern"];
    check_keys(pj, "pattern", {"family", "optimal", "preference", "N1", "N2", "levels"});
    cfg.pattern.family = parse_family(field<std::string>(pj, "family", "nested", "pattern"));
    const bool explicit_params = pj.contains("N1") || pj.contains("levels");
    cfg.pattern.optimal = field(pj, "optimal", !explicit_params, "pattern");
    cfg.pattern.preference =
        parse_gap_preference(field<std::string>(pj, "preference", "fewer_larger_gaps", "pattern"));
    cfg.pattern.n1 = field(pj, "N1", 0, "pattern");
    cfg.pattern.n2 = field(pj, "N2", 0, "pattern");
    cfg.pattern.levels = field<std::vector<int>>(pj, "levels", {}, "pattern");
  }

  if (j.contains("units")) {
    const auto& uj = j["units"];
    check_keys(uj, "units", {"f0", "prf", "c"});
    cfg.units.center_frequency = field(uj, "f0", cfg.units.center_frequency, "units");
    cfg.units.prf = field(uj, "prf", cfg.units.prf, "units");
    cfg.units.sound_speed = field(uj, "c", cfg.units.sound_speed, "units");
    if (!(cfg.units.center_frequency > 0 && cfg.units.prf > 0 && cfg.units.sound_speed > 0))
      throw_config(kModule, "units f0, prf and c must be positive");
  }

  if (j.contains("tones")) {
    std::vector<Tone> tones;
    for (const auto& t : j["tones"]) {
      check_keys(t, "tones[]", {"frequency", "velocity", "power"});
      Tone tone;
      tone.power = field(t, "power", 1.0, "tones[]");
      if (t.contains("velocity")) {
        tone.frequency = velocity_to_frequency(t["velocity"].get<double>(), cfg.units);
      } else if (t.contains("frequency")) {
        tone.frequency = t["frequency"].get<double>();
      } else {
        throw_config(kModule, "each tone needs 'frequency' or 'velocity'");
      }
      if (!(tone.frequency >= -0.5 && tone.frequency < 0.5))
        throw_config(kModule, "tone frequency " + std::to_string(tone.frequency) +
                                  " outside [-1/2, 1/2); check velocity against the PRF");
      if (!(tone.power >= 0.0)) throw_config(kModule, "tone power must be nonnegative");
      tones.push_back(tone);
    }
    cfg.tones = ToneSet(std::move(tones));
  }
  if (j.contains("profile")) cfg.profile = parse_profile(j["profile"], base_dir);

  cfg.snapshots = field(j, "snapshots", cfg.snapshots, "config");
  if (cfg.snapshots < 1) throw_config(kModule, "snapshots must be >= 1");
  cfg.snr_db = field(j, "snr_db", cfg.snr_db, "config");
  if (j.contains("noise_power")) {
    cfg.noise_power = field(j, "noise_power", 0.0, "config");
    if (!(*cfg.noise_power >= 0.0)) throw_config(kModule, "noise_power must be >= 0");
  }
  cfg.snr_list = field(j, "snr_list", cfg.snr_list, "config");
  cfg.trials = field(j, "trials", cfg.trials, "config");
  if (cfg.trials < 1) throw_config(kModule, "trials must be >= 1");
  cfg.analytic = field(j, "analytic", cfg.analytic, "config");
  cfg.processing.remove_mean = field(j, "remove_mean", cfg.processing.remove_mean, "config");

  if (j.contains("filter") && !j["filter"].is_null()) {
    if (j["filter"].is_string() && j["filter"].get<std::string>() == "none") {
      cfg.processing.clutter_filter.reset();
    } else {
      cfg.processing.clutter_filter = parse_filter(j["filter"]);
    }
  }
  if (j.contains("apodization") && !j["apodization"].is_null()) {
    const auto name = field<std::string>(j, "apodization", "none", "config");
    if (name != "none") cfg.processing.apodization = parse_window(name);
  }

  if (j.contains("lambda")) {
    const auto& lj = j["lambda"];
    if (lj.is_number()) {
      cfg.settings.nest_lambda = cfg.settings.nesprit.lambda = lj.get<double>();
    } else {
      check_keys(lj, "lambda", {"nest", "nesprit"});
      cfg.settings.nest_lambda = field(lj, "nest", cfg.settings.nest_lambda, "lambda");
      cfg.settings.nesprit.lambda = field(lj, "nesprit", cfg.settings.nesprit.lambda, "lambda");
    }
    if (cfg.settings.nest_lambda < 0.0 || cfg.settings.nesprit.lambda < 0.0)
      throw_config(kModule, "lambda values must be >= 0");
  }
  if (j.contains("nesprit")) {
    const auto& nj = j["nesprit"];
    check_keys(nj, "nesprit", {"model_order", "subtract_noise_floor", "rcond"});
    if (nj.contains("model_order") && !nj["model_order"].is_null())
      cfg.settings.nesprit.model_order = field(nj, "model_order", 0, "nesprit");
    cfg.settings.nesprit.subtract_noise_floor =
        field(nj, "subtract_noise_floor", cfg.settings.nesprit.subtract_noise_floor, "nesprit");
    cfg.settings.nesprit.rcond = field(nj, "rcond", cfg.settings.nesprit.rcond, "nesprit");
  }
  if (j.contains("welch")) {
    const auto& wj = j["welch"];
    check_keys(wj, "welch", {"segment_length", "overlap", "window", "zero_fill"});
    cfg.settings.welch.segment_length = field(wj, "segment_length", 0, "welch");
    cfg.settings.welch.overlap = field(wj, "overlap", 0.0, "welch");
    cfg.settings.welch.window =
        parse_window(field<std::string>(wj, "window", "rectangular", "welch"));
    cfg.settings.welch_zero_fill = field(wj, "zero_fill", false, "welch");
  }
  if (j.contains("estimators")) {
    cfg.estimators.clear();
    for (const auto& e : j["estimators"]) cfg.estimators.push_back(parse_estimator(e.get<std::string>()));
    if (cfg.estimators.empty()) throw_config(kModule, "estimators list is empty");
  }
  cfg.support_halfwidth = field(j, "support_halfwidth", cfg.support_halfwidth, "config");
  cfg.seed = field<std::uint64_t>(j, "seed", cfg.seed, "config");
  if (j.contains("output")) {
    const auto& oj = j["output"];
    check_keys(oj, "output", {"dir", "formats"});
    cfg.output.dir = field(oj, "dir", cfg.output.dir, "output");
    cfg.output.formats = field(oj, "formats", cfg.output.formats, "output");
    for (const auto& f : cfg.output.formats) {
      if (f != "csv" && f != "json" && f != "pgm")
        throw_config(kModule, "output format '" + f + "' must be csv, json or pgm");
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, std::string(kModule), "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path().string();
  return parse_experiment_config(buf.str(), base.empty() ? "." : base);
}

}  // namespace nestdop
