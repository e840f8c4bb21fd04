#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nestdop/error.hpp"
#include "nestdop/experiments.hpp"
#include "nestdop/serialization.hpp"

namespace nestdop::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr std::string_view kModule = "experiments_cli";

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::string pattern;
  std::vector<std::string> estimators;
  std::string out_dir;
  std::vector<std::string> formats;
};

struct DesignOptions {
  std::optional<int> window_size;
  std::string preference;
};

struct EstimateOptions {
  std::string input;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_config(kModule, "--pattern parameter '" + item + "' is not an integer");
    }
  }
  return values;
}

// "family" or "family:a,b,...".
PatternSpec parse_pattern_flag(const std::string& text, PatternSpec spec) {
  const auto colon = text.find(':');
  spec.family = parse_family(text.substr(0, colon));
  if (colon == std::string::npos) {
    spec.optimal = true;
    return spec;
  }
  const auto params = parse_int_list(text.substr(colon + 1));
  spec.optimal = false;
  if (spec.family == PatternFamily::k_level) {
    spec.levels = params;
  } else if (spec.family == PatternFamily::standard) {
    throw_config(kModule, "--pattern standard takes no parameters");
  } else {
    if (params.size() != 2) throw_config(kModule, "--pattern " + text + " needs exactly N1,N2");
    spec.n1 = params[0];
    spec.n2 = params[1];
  }
  return spec;
}

ExperimentConfig load(const CommonOptions& opts) {
  ExperimentConfig cfg = opts.config_path.empty() ? ExperimentConfig{}
                                                  : load_experiment_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.lambda) {
    if (*opts.lambda < 0.0) throw_config(kModule, "--lambda must be >= 0");
    cfg.settings.nest_lambda = *opts.lambda;
    cfg.settings.nesprit.lambda = *opts.lambda;
    cfg.present.emplace_back("lambda");
  }
  if (!opts.pattern.empty()) cfg.pattern = parse_pattern_flag(opts.pattern, cfg.pattern);
  if (!opts.estimators.empty()) {
    cfg.estimators.clear();
    for (const auto& e : opts.estimators) cfg.estimators.push_back(parse_estimator(e));
  }
  if (!opts.out_dir.empty()) cfg.output.dir = opts.out_dir;
  if (!opts.formats.empty()) cfg.output.formats = opts.formats;
  return cfg;
}

bool wants(const ExperimentConfig& cfg, std::string_view format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) !=
         cfg.output.formats.end();
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::io, std::string(kModule), "cannot create " + dir + ": " + ec.message());
  }

  template <typename Fn>
  void write(const std::string& name, Fn&& fn, std::ios::openmode mode = std::ios::out) {
    const auto path = dir_ / name;
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, std::string(kModule), "cannot write " + path.string());
    fn(out);
    if (!out) throw Error(ErrorKind::io, std::string(kModule), "failed writing " + path.string());
    written_.push_back(path.string());
  }

  void text(const std::string& name, const std::string& body) {
    write(name, [&](std::ostream& o) { o << body << '\n'; });
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

void list_written(const OutputDir& dir, std::ostream& out) {
  for (const auto& f : dir.written()) out << "wrote " << f << '\n';
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

double blood_power(const PulsatileProfile& profile) {
  double total = 0.0;
  for (const auto& f : profile.frames) total += f.total_power();
  return total / static_cast<double>(profile.frames.size());
}

const PulsatileProfile& require_profile(const ExperimentConfig& cfg, std::string_view command) {
  if (!cfg.profile)
    throw_config(kModule, std::string(command) + " needs a 'profile' in the config");
  return *cfg.profile;
}

const ToneSet& require_tones(const ExperimentConfig& cfg, std::string_view command) {
  if (cfg.tones.empty())
    throw_config(kModule, std::string(command) + " needs a non-empty 'tones' list in the config");
  return cfg.tones;
}

double halfwidth_for(const ExperimentConfig& cfg) {
  return cfg.support_halfwidth > 0.0 ? cfg.support_halfwidth : 2.0 / cfg.window_size;
}

// ---- design -------------------------------------------------------------

std::string slot_summary(const EmissionPattern& p) {
  std::ostringstream os;
  const auto slots = p.slots();
  os << '{';
  const std::size_t limit = 40;
  for (std::size_t i = 0; i < slots.size() && i < limit; ++i) os << (i ? "," : "") << slots[i];
  if (slots.size() > limit) os << ",... (" << slots.size() - limit << " more)";
  os << '}';
  return os.str();
}

std::string gap_summary(const std::vector<int>& gaps) {
  if (gaps.empty()) return "none";
  std::map<int, int> counts;
  for (int g : gaps) ++counts[g];
  std::ostringstream os;
  bool first = true;
  for (const auto& [size, count] : counts) {
    os << (first ? "" : ", ") << count << (count == 1 ? " gap" : " gaps") << " of " << size;
    first = false;
  }
  return os.str();
}

void report_pattern(const EmissionPattern& p, std::ostream& out) {
  const double savings = 100.0 * (1.0 - static_cast<double>(p.size()) / p.window_size());
  out << "family        " << to_string(p.family()) << '\n';
  out << "params        ";
  for (std::size_t i = 0; i < p.params().size(); ++i) out << (i ? "," : "") << p.params()[i];
  out << '\n';
  out << "P             " << p.window_size() << '\n';
  out << "N             " << p.size() << '\n';
  out << "savings       " << fixed(savings, 1) << "%\n";
  out << "slots         " << slot_summary(p) << '\n';
  out << "idle gaps     " << gap_summary(idle_gaps(p)) << '\n';
  out << "contiguous    " << (verify_contiguous_coarray(p) ? "yes" : "no") << '\n';
}

json pattern_report_json(const EmissionPattern& p) {
  json j = json::parse(pattern_to_json(p));
  j["N"] = p.size();
  j["savings_percent"] = 100.0 * (1.0 - static_cast<double>(p.size()) / p.window_size());
  j["idle_gaps"] = idle_gaps(p);
  j["contiguous_coarray"] = verify_contiguous_coarray(p);
  return j;
}

int cmd_design(const CommonOptions& opts, const DesignOptions& design, std::ostream& out) {
  ExperimentConfig cfg = load(opts);
  if (design.window_size) cfg.window_size = *design.window_size;
  if (!design.preference.empty()) cfg.pattern.preference = parse_gap_preference(design.preference);
  if (cfg.window_size < 2) throw_config(kModule, "P must be >= 2");

  std::vector<EmissionPattern> patterns;
  const bool list_all = cfg.pattern.optimal && !design.preference.size() &&
                        (cfg.pattern.family == PatternFamily::nested ||
                         cfg.pattern.family == PatternFamily::super_nested);
  if (list_all) {
    for (const auto& opt : optimal_nested_all(cfg.window_size)) {
      PatternSpec spec = cfg.pattern;
      spec.optimal = false;
      spec.n1 = opt.n1;
      spec.n2 = opt.n2;
      patterns.push_back(build_pattern(spec, cfg.window_size));
    }
  } else {
    patterns.push_back(build_pattern(cfg.pattern, cfg.window_size));
  }

  if (patterns.size() > 1) out << patterns.size() << " optimal patterns for P = " << cfg.window_size << "\n\n";
  json all = json::array();
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (i) out << '\n';
    report_pattern(patterns[i], out);
    all.push_back(pattern_report_json(patterns[i]));
  }

  OutputDir dir(cfg.output.dir);
  if (wants(cfg, "json")) dir.text("design.json", all.dump(2));
  if (wants(cfg, "csv")) {
    dir.write("design.csv", [&](std::ostream& o) {
      o << "pattern,slot\n";
      for (std::size_t i = 0; i < patterns.size(); ++i)
        for (int s : patterns[i].slots()) o << i << ',' << s << '\n';
    });
  }
  list_written(dir, out);
  return 0;
}

// ---- simulate -----------------------------------------------------------

int cmd_simulate(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load(opts);
  const auto pattern = build_pattern(cfg.pattern, cfg.window_size);
  OutputDir dir(cfg.output.dir);

  std::vector<SlowTimeSnapshots> frames;
  if (cfg.profile) {
    const double noise = cfg.noise_for(blood_power(*cfg.profile));
    frames = generate_pulsatile(*cfg.profile, pattern, cfg.snapshots, noise, cfg.seed);
    if (wants(cfg, "json")) dir.text("profile.json", profile_to_json(*cfg.profile));
  } else {
    const auto& tones = require_tones(cfg, "simulate");
    frames.push_back(generate_snapshots(tones, pattern, cfg.snapshots,
                                        cfg.noise_for(tones.total_power()), cfg.seed));
  }

  for (std::size_t f = 0; f < frames.size(); ++f) {
    std::string stem = "snapshots";
    if (frames.size() > 1) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "snapshots_%04zu", f);
      stem = buf;
    }
    dir.write(stem + ".nsts", [&](std::ostream& o) { write_snapshots_binary(frames[f], o); },
              std::ios::out | std::ios::binary);
    if (wants(cfg, "csv"))
      dir.write(stem + ".csv", [&](std::ostream& o) { write_snapshots_csv(frames[f], o); });
  }
  if (wants(cfg, "json")) dir.text("pattern.json", pattern_to_json(pattern));
  out << "simulated " << frames.size() << (frames.size() == 1 ? " CPI" : " CPIs") << " of Q = "
      << cfg.snapshots << " snapshots on " << to_string(pattern.family()) << " pattern (N = "
      << pattern.size() << ", P = " << pattern.window_size() << ")\n";
  list_written(dir, out);
  return 0;
}

// ---- estimate -----------------------------------------------------------

int cmd_estimate(const CommonOptions& opts, const EstimateOptions& est, std::ostream& out) {
  const ExperimentConfig cfg = load(opts);
  std::optional<SlowTimeSnapshots> data;
  if (!est.input.empty()) {
    std::ifstream in(est.input, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, std::string(kModule), "cannot open " + est.input);
    data = read_snapshots_binary(in);
  } else {
    const auto pattern = build_pattern(cfg.pattern, cfg.window_size);
    const auto& tones = require_tones(cfg, "estimate");
    data = generate_snapshots(tones, pattern, cfg.snapshots, cfg.noise_for(tones.total_power()),
                              cfg.seed);
  }
  const auto& pattern = data->pattern();

  OutputDir dir(cfg.output.dir);
  const bool needs_coarray = std::any_of(cfg.estimators.begin(), cfg.estimators.end(),
                                         [](Estimator e) { return e != Estimator::welch; });
  if (needs_coarray) {
    const auto z = process_coarray(*data, cfg.processing);
    if (wants(cfg, "csv")) dir.write("coarray.csv", [&](std::ostream& o) { write_coarray_csv(z, o); });
    if (wants(cfg, "json")) dir.text("coarray.json", coarray_to_json(z));
    for (auto e : cfg.estimators) {
      if (e != Estimator::nesprit) continue;
      const auto lines = nesprit(z, cfg.settings.nesprit);
      if (wants(cfg, "csv")) dir.write("lines_nesprit.csv", [&](std::ostream& o) { write_lines_csv(lines, o); });
      if (wants(cfg, "json")) dir.text("lines_nesprit.json", lines_to_json(lines));
      out << "nesprit model order " << lines.model_order << ", noise estimate "
          << format_double(lines.noise_estimate) << '\n';
      for (const auto& l : lines.lines) {
        out << "  line nu = " << fixed(l.frequency, 6) << "  v = "
            << fixed(frequency_to_velocity(l.frequency, cfg.units), 4) << " m/s  power = "
            << format_double(l.power) << '\n';
      }
    }
  }

  for (auto e : cfg.estimators) {
    const auto spectrum = estimate_frame(*data, e, cfg.processing, cfg.settings);
    const std::string name(to_string(e));
    if (wants(cfg, "csv"))
      dir.write("spectrum_" + name + ".csv", [&](std::ostream& o) { write_spectrum_csv(spectrum, o); });
    if (wants(cfg, "json")) dir.text("spectrum_" + name + ".json", spectrum_to_json(spectrum));
    const double nu = spectrum.peak_frequency();
    out << name << " peak nu = " << fixed(nu, 6) << "  v = "
        << fixed(frequency_to_velocity(nu, cfg.units), 4) << " m/s  (" << spectrum.size()
        << " bins)\n";
  }
  out << "pattern " << to_string(pattern.family()) << " N = " << pattern.size() << " P = "
      << pattern.window_size() << "; " << cfg.processing.describe() << '\n';
  list_written(dir, out);
  return 0;
}

// ---- spectrogram --------------------------------------------------------

void write_spectrogram(OutputDir& dir, const ExperimentConfig& cfg, const std::string& stem,
                       const Spectrogram& spec, const std::optional<RidgeStats>& ridge,
                       std::optional<double> artifact_db) {
  if (wants(cfg, "csv"))
    dir.write(stem + ".csv", [&](std::ostream& o) { write_spectrogram_csv(spec, o); });
  if (wants(cfg, "pgm"))
    dir.write(stem + ".pgm", [&](std::ostream& o) { write_pgm(render(spec), o); },
              std::ios::out | std::ios::binary);
  if (wants(cfg, "json")) {
    json j;
    j["estimator"] = spec.metadata().estimator;
    j["pattern"] = json::parse(spec.metadata().pattern);
    j["processing"] = spec.metadata().processing;
    j["P"] = spec.metadata().window_size;
    j["bins"] = spec.bins();
    j["frames"] = spec.frame_count();
    json stamps = json::array();
    for (const auto& f : spec.frames()) stamps.push_back(f.timestamp);
    j["timestamps"] = stamps;
    j["ridge"] = spec.ridge();
    if (ridge) {
      j["ridge_hit_rate"] = ridge->hit_rate;
      j["ridge_mean_error_bins"] = ridge->mean_error_bins;
      j["ridge_max_error_bins"] = ridge->max_error_bins;
    }
    if (artifact_db) j["artifact_energy_db"] = *artifact_db;
    dir.text(stem + ".json", j.dump(2));
  }
}

std::vector<double> truth_ridge(const PulsatileProfile& profile) {
  std::vector<double> peaks;
  for (const auto& f : profile.frames) peaks.push_back(f.peak_frequency().value_or(0.0));
  return peaks;
}

int cmd_spectrogram(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load(opts);
  const auto& profile = require_profile(cfg, "spectrogram");
  const auto pattern = build_pattern(cfg.pattern, cfg.window_size);
  const auto frames = generate_pulsatile(profile, pattern, cfg.snapshots,
                                         cfg.noise_for(blood_power(profile)), cfg.seed);
  const auto truth = truth_ridge(profile);

  OutputDir dir(cfg.output.dir);
  for (auto e : cfg.estimators) {
    const auto spec = run_spectrogram(frames, e, cfg.processing, cfg.settings, profile.cpis_per_frame);
    const auto ridge = ridge_stats(spec, truth, cfg.window_size);
    const double artifact = artifact_energy_db(spec, profile, halfwidth_for(cfg));
    write_spectrogram(dir, cfg, "spectrogram_" + std::string(to_string(e)), spec, ridge, artifact);
    out << to_string(e) << ": " << spec.frame_count() << " frames x " << spec.bins()
        << " bins, ridge hit rate " << fixed(100.0 * ridge.hit_rate, 1) << "%, mean error "
        << fixed(ridge.mean_error_bins, 2) << " bins, artifact energy " << fixed(artifact, 1)
        << " dB\n";
  }
  list_written(dir, out);
  return 0;
}

// ---- mse ----------------------------------------------------------------

int cmd_mse(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load(opts);
  MseConfig mse;
  if (!cfg.tones.empty()) mse.frequency = cfg.tones.tones().front().frequency;
  if (cfg.has("P") || cfg.has("pattern") || !opts.pattern.empty()) {
    const auto pattern = build_pattern(cfg.pattern, cfg.has("P") ? cfg.window_size : 8);
    if (pattern.family() != PatternFamily::nested)
      throw_config(kModule, "mse sweeps a two-level nested pattern; got " +
                                std::string(to_string(pattern.family())));
    mse.n1 = pattern.params()[0];
    mse.n2 = pattern.params()[1];
  }
  if (cfg.has("snapshots")) mse.snapshots = cfg.snapshots;
  if (cfg.has("snr_list")) mse.snr_db = cfg.snr_list;
  if (cfg.has("trials")) mse.trials = cfg.trials;
  mse.seed = cfg.seed;
  mse.analytic = cfg.analytic;
  mse.remove_mean = cfg.has("remove_mean") && cfg.processing.remove_mean;
  if (cfg.has("lambda")) {
    mse.nest_lambda = cfg.settings.nest_lambda;
    mse.nesprit_lambda = cfg.settings.nesprit.lambda;
  }
  if (cfg.has("nesprit")) mse.nesprit_order = cfg.settings.nesprit.model_order;

  const auto rows = run_mse(mse);
  const int window = mse.n2 * (mse.n1 + 1);
  out << "MSE of the peak frequency, nu = " << format_double(mse.frequency) << ", nested ("
      << mse.n1 << "," << mse.n2 << "), P = " << window << ", Q = " << mse.snapshots
      << (mse.analytic ? ", analytic covariance" : ", " + std::to_string(mse.trials) + " trials")
      << "\n\n";
  out << std::setw(8) << "snr_db";
  for (auto e : {Estimator::nest, Estimator::nesprit, Estimator::welch})
    out << std::setw(14) << to_string(e);
  out << '\n';
  for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
    out << std::setw(8) << rows[i].snr_db;
    for (std::size_t k = 0; k < 3; ++k) {
      std::ostringstream cell;
      cell << std::scientific << std::setprecision(3) << rows[i + k].mse;
      out << std::setw(14) << cell.str();
    }
    out << '\n';
  }

  OutputDir dir(cfg.output.dir);
  if (wants(cfg, "csv")) {
    dir.write("mse.csv", [&](std::ostream& o) {
      o << "snr_db,estimator,mse,trials\n";
      for (const auto& r : rows)
        o << format_double(r.snr_db) << ',' << to_string(r.estimator) << ','
          << format_double(r.mse) << ',' << r.trials << '\n';
    });
  }
  if (wants(cfg, "json")) {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"snr_db", r.snr_db}, {"estimator", std::string(to_string(r.estimator))},
                   {"mse", r.mse}, {"trials", r.trials}});
    dir.text("mse.json", j.dump(2));
  }
  list_written(dir, out);
  return 0;
}

// ---- compare ------------------------------------------------------------

int cmd_compare(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load(opts);
  const auto& profile = require_profile(cfg, "compare");
  const auto pattern = build_pattern(cfg.pattern, cfg.window_size);
  const auto frames = generate_pulsatile(profile, pattern, cfg.snapshots,
                                         cfg.noise_for(blood_power(profile)), cfg.seed);
  const double halfwidth = halfwidth_for(cfg);

  struct Variant {
    std::string suffix;
    ProcessingConfig processing;
  };
  std::vector<Variant> variants{{"", cfg.processing}};
  if (cfg.processing.clutter_filter) {
    ProcessingConfig raw = cfg.processing;
    raw.clutter_filter.reset();
    raw.apodization.reset();
    variants.push_back({"_unfiltered", raw});
  }

  OutputDir dir(cfg.output.dir);
  json report;
  report["pattern"] = pattern_report_json(pattern);
  report["support_halfwidth"] = halfwidth;
  report["estimators"] = json::array();

  out << "pattern " << to_string(pattern.family()) << " N = " << pattern.size() << " of P = "
      << pattern.window_size() << ", " << frames.size() << " frames\n\n";
  out << std::left << std::setw(24) << "estimator" << std::right << std::setw(12) << "ridge hit"
      << std::setw(14) << "mean err" << std::setw(16) << "artifact dB" << '\n';
  for (const auto& v : variants) {
    const auto cmp = run_compare(frames, profile, cfg.estimators, v.processing, cfg.settings, halfwidth);
    for (const auto& r : cmp.estimators) {
      const std::string name = std::string(to_string(r.estimator)) + v.suffix;
      write_spectrogram(dir, cfg, "compare_" + name, r.spectrogram, r.ridge, r.artifact_db);
      report["estimators"].push_back({{"name", name},
                                      {"processing", v.processing.describe()},
                                      {"ridge_hit_rate", r.ridge.hit_rate},
                                      {"ridge_mean_error_bins", r.ridge.mean_error_bins},
                                      {"ridge_max_error_bins", r.ridge.max_error_bins},
                                      {"artifact_energy_db", r.artifact_db}});
      out << std::left << std::setw(24) << name << std::right << std::setw(11)
          << fixed(100.0 * r.ridge.hit_rate, 1) << '%' << std::setw(14)
          << fixed(r.ridge.mean_error_bins, 2) << std::setw(16) << fixed(r.artifact_db, 1) << '\n';
    }
  }
  if (wants(cfg, "json")) dir.text("compare.json", report.dump(2));
  if (wants(cfg, "csv")) {
    dir.write("compare.csv", [&](std::ostream& o) {
      o << "estimator,ridge_hit_rate,ridge_mean_error_bins,ridge_max_error_bins,artifact_energy_db\n";
      for (const auto& e : report["estimators"])
        o << e["name"].get<std::string>() << ',' << format_double(e["ridge_hit_rate"].get<double>())
          << ',' << format_double(e["ridge_mean_error_bins"].get<double>()) << ','
          << format_double(e["ridge_max_error_bins"].get<double>()) << ','
          << format_double(e["artifact_energy_db"].get<double>()) << '\n';
    });
  }
  out << '\n';
  list_written(dir, out);
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "RNG seed (overrides config)");
  cmd->add_option("--lambda", opts.lambda, "NEST and NESPRIT threshold (overrides config)");
  cmd->add_option("--pattern", opts.pattern,
                  "family[:params], e.g. nested, nested:15,16, k_level:1,1,3");
  cmd->add_option("--estimator", opts.estimators, "nest, nesprit or welch (repeatable)")
      ->delimiter(',');
  cmd->add_option("--out-dir", opts.out_dir, "output directory (overrides config)");
  cmd->add_option("--format", opts.formats, "csv, json or pgm (repeatable)")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "pgm"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse nested pulse patterns and Doppler spectrum recovery"};
  app.name("nestdop");
  app.require_subcommand(1);

  CommonOptions opts;
  DesignOptions design;
  EstimateOptions estimate;

  auto* design_cmd = app.add_subcommand("design", "Report an emission pattern for a window size");
  add_common(design_cmd, opts);
  design_cmd->add_option("-P,--window-size", design.window_size, "observation window P");
  design_cmd->add_option("--preference", design.preference,
                         "fewer_larger_gaps or more_smaller_gaps");

  auto* simulate_cmd = app.add_subcommand("simulate", "Generate slow-time snapshots");
  add_common(simulate_cmd, opts);

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate the spectrum of one CPI");
  add_common(estimate_cmd, opts);
  estimate_cmd->add_option("--input", estimate.input, "snapshot file written by simulate")
      ->check(CLI::ExistingFile);

  auto* spectrogram_cmd = app.add_subcommand("spectrogram", "Spectrogram of a pulsatile profile");
  add_common(spectrogram_cmd, opts);

  auto* mse_cmd = app.add_subcommand("mse", "Monte Carlo MSE versus SNR sweep");
  add_common(mse_cmd, opts);

  auto* compare_cmd = app.add_subcommand("compare", "Side-by-side estimator comparison");
  add_common(compare_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*design_cmd) return cmd_design(opts, design, out);
    if (*simulate_cmd) return cmd_simulate(opts, out);
    if (*estimate_cmd) return cmd_estimate(opts, estimate, out);
    if (*spectrogram_cmd) return cmd_spectrogram(opts, out);
    if (*mse_cmd) return cmd_mse(opts, out);
    if (*compare_cmd) return cmd_compare(opts, out);
  } catch (const Error& e) {
    const char* kind = e.kind() == ErrorKind::precondition ? "precondition violated"
                       : e.kind() == ErrorKind::config     ? "invalid configuration"
                                                           : "i/o failure";
    err << "nestdop: " << kind << " " << e.what() << '\n';
    return e.kind() == ErrorKind::precondition ? 3 : 2;
  } catch (const std::exception& e) {
    err << "nestdop: unexpected failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace nestdop::cli
