#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nestdop/coarray.hpp"
#include "nestdop/error.hpp"
#include "nestdop/estimators.hpp"
#include "nestdop/experiments.hpp"
#include "nestdop/signal_model.hpp"
#include "oracles.hpp"

using namespace nestdop;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 means no limit
  std::function<Outcome()> run;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

Outcome nested_coarray_exhaustive() {
  int failures = 0;
  for (int n1 = 1; n1 <= 30; ++n1)
    for (int n2 = 1; n2 <= 30; ++n2) {
      const auto p = build_nested(n1, n2);
      const auto lags = oracle::lags(p.slots());
      const int P = n2 * (n1 + 1);
      const bool ok = oracle::contiguous(lags, P - 1) &&
                      static_cast<int>(lags.size()) == 2 * n2 * (n1 + 1) - 1 &&
                      verify_contiguous_coarray(p);
      failures += !ok;
    }
  return {failures == 0, std::to_string(failures) + " failures over 900 (N1, N2) pairs"};
}

Outcome nested_optimum_oracle() {
  int checked = 0, failures = 0;
  for (int P = 4; P <= 10000; ++P) {
    if (oracle::is_prime(P)) continue;
    ++checked;
    const int want = oracle::nested_min_transmissions(P);
    for (auto pref : {GapPreference::fewer_larger_gaps, GapPreference::more_smaller_gaps}) {
      const auto opt = optimal_nested(P, pref);
      if (opt.transmissions() != want || opt.window_size() != P) ++failures;
    }
  }
  const int n256 = optimal_nested(256).transmissions();
  const int n128 = optimal_nested(128).transmissions();
  const bool spots = n256 == 31 && n128 == 23;
  return {failures == 0 && spots, std::to_string(failures) + " mismatches over " +
                                      std::to_string(checked) + " composite P; P=256 -> N=" +
                                      std::to_string(n256) + ", P=128 -> N=" + std::to_string(n128)};
}

Outcome klevel_optimum_oracle() {
  int failures = 0;
  for (int P = 2; P <= 2000; ++P) {
    const auto opt = optimal_klevel(P);
    int closed = 1;
    for (int p : oracle::prime_factors(P)) closed += p - 1;
    const int n = opt.transmissions();
    const bool ok = n == oracle::klevel_min_transmissions(P) && n == closed &&
                    opt.window_size() == P &&
                    static_cast<int>(build_klevel(opt).size()) == n;
    failures += !ok;
  }
  const auto p12 = optimal_klevel(12);
  const bool spot = p12.transmissions() == 5 && p12.levels == std::vector<int>{1, 1, 3};
  return {failures == 0 && spot,
          std::to_string(failures) + " mismatches for P <= 2000; P=12 -> N=" +
              std::to_string(p12.transmissions())};
}

Outcome toeplitz_exactness() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> freq(-0.5, 0.5), power(0.01, 10.0), noise(0.0, 1.0);
  const int sizes[] = {16, 64, 256};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int P = sizes[trial % 3];
    const auto opt = optimal_nested(P);
    const auto pattern = build_nested(opt.n1, opt.n2);
    std::vector<Tone> tones;
    std::vector<double> nu, pw;
    for (int m = count(rng); m > 0; --m) {
      tones.push_back({freq(rng), power(rng)});
      nu.push_back(tones.back().frequency);
      pw.push_back(tones.back().power);
    }
    const double s2 = noise(rng);
    const auto r = analytic_covariance(ToneSet(tones), pattern, s2);
    const auto t = build_toeplitz(lag_average(CovarianceEstimate::exact(r), pattern));
    const auto want = oracle::ula_covariance(nu, pw, s2, P);
    worst = std::max(worst, (t - want).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-10, "max abs error " + sci(worst) + " over 100 tone sets"};
}

Outcome nesprit_precision() {
  const auto pattern = build_nested(3, 2);
  const auto z = lag_average(
      CovarianceEstimate::exact(analytic_covariance(ToneSet({{0.2, 1.0}}), pattern, 0.0)), pattern);
  NespritOptions o;
  o.model_order = 1;
  const auto lines = nesprit(z, o);
  const double err = lines.lines.empty() ? 1.0 : std::abs(lines.lines[0].frequency - 0.2);
  return {err < 1e-9, "|nu_hat - 0.2| = " + sci(err)};
}

Outcome nest_dense_grid() {
  int failures = 0;
  double worst = 0.0;
  for (int P : {8, 12, 64}) {
    const auto opt = optimal_nested(P);
    const auto pattern = build_nested(opt.n1, opt.n2);
    const int n = 2 * P - 1;
    for (int k = 0; k < n; ++k) {
      const double nu = wrap_frequency(static_cast<double>(k) / n);
      const auto z = lag_average(
          CovarianceEstimate::exact(analytic_covariance(ToneSet({{nu, 1.0}}), pattern, 0.0)), pattern);
      const auto s = nest(z, 0.0);
      int nonzero = 0;
      for (double v : s.powers()) nonzero += std::abs(v) >= 1e-10;
      const double err = std::abs(s[s.bin_of(nu)] - 1.0);
      worst = std::max(worst, err);
      if (nonzero != 1 || err >= 1e-10) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failing grid tones, max power error " + sci(worst)};
}

Outcome mse_ordering() {
  const MseConfig cfg;
  const auto rows = run_mse(cfg);
  const double half_bin = 0.5 / (2.0 * cfg.n2 * (cfg.n1 + 1) - 1.0);
  const double bound = half_bin * half_bin;
  bool high_ok = true, low_ok = true;
  std::ostringstream detail;
  for (double snr : cfg.snr_db) {
    double m[3] = {0, 0, 0};
    for (const auto& r : rows)
      if (r.snr_db == snr) m[static_cast<int>(r.estimator)] = r.mse;
    if (snr >= 25) {
      const bool ok = m[1] < m[2] && m[0] <= bound;
      high_ok = high_ok && ok;
      detail << " [" << snr << " dB nest " << sci(m[0]) << " nesprit " << sci(m[1]) << " welch "
             << sci(m[2]) << (ok ? "" : " X") << "]";
    }
    if (snr <= -5) {
      const double lo = *std::min_element(m, m + 3), hi = *std::max_element(m, m + 3);
      const bool ok = lo > 0.0 && hi <= 10.0 * lo;
      low_ok = low_ok && ok;
      detail << " [" << snr << " dB nest " << sci(m[0]) << " nesprit " << sci(m[1]) << " welch "
             << sci(m[2]) << (ok ? "" : " X") << "]";
    }
  }
  return {high_ok && low_ok, std::string("high SNR ") + (high_ok ? "ok" : "fails") + ", low SNR " +
                                 (low_ok ? "ok" : "fails") + ";" + detail.str()};
}

Outcome clutter_suppression() {
  const auto pattern = build_nested(15, 16);
  const ToneSet tones({{0.2, 1.0}, {0.005, 1e4}});
  const auto cov = CovarianceEstimate::exact(analytic_covariance(tones, pattern, 0.01));
  ProcessingConfig proc;
  proc.remove_mean = false;
  proc.clutter_filter = butterworth_highpass(4, 0.03);
  proc.apodization = WindowKind::hamming;
  const auto s = nest(process_coarray(cov, pattern, proc), 0.0);
  const auto peak = s.peak_bin();
  const auto blood = s.bin_of(0.2);
  const auto clutter = s.bin_of(0.005);
  const bool peak_ok = std::abs(static_cast<long>(peak) - static_cast<long>(blood)) <= 1;
  const double rel_db = s[clutter] > 0.0 ? 10.0 * std::log10(s[clutter] / s[peak]) : -INFINITY;
  return {peak_ok && rel_db <= -30.0, "peak at nu = " + std::to_string(s.frequency(peak)) +
                                          ", clutter bin " +
                                          (std::isinf(rel_db) ? std::string("-inf") : std::to_string(rel_db)) +
                                          " dB"};
}

Outcome minimal_rate_spectrogram() {
  const auto pattern = build_nested(15, 16);
  const auto profile = sinusoidal_profile(SinusoidalProfileSpec{});
  double blood = 0.0;
  for (const auto& f : profile.frames) blood += f.total_power();
  blood /= static_cast<double>(profile.frames.size());
  const auto frames = generate_pulsatile(profile, pattern, 33, noise_power_for_snr(blood, 20.0), 1);
  const auto report = run_compare(frames, profile, {Estimator::nest, Estimator::nesprit, Estimator::welch},
                                  ProcessingConfig{}, EstimatorSettings{}, 2.0 / 256);
  const auto* nest_r = report.find(Estimator::nest);
  const auto* nesprit_r = report.find(Estimator::nesprit);
  const auto* welch_r = report.find(Estimator::welch);
  const double gap = welch_r->artifact_db - nest_r->artifact_db;
  const bool ok = nest_r->ridge.hit_rate >= 0.9 && nesprit_r->ridge.hit_rate >= 0.9 && gap >= 6.0;
  std::ostringstream d;
  d << std::fixed << std::setprecision(1) << "ridge hits nest " << 100 * nest_r->ridge.hit_rate
    << "% nesprit " << 100 * nesprit_r->ridge.hit_rate << "%; artifact nest " << nest_r->artifact_db
    << " dB welch " << welch_r->artifact_db << " dB (gap " << gap << " dB)";
  return {ok, d.str()};
}

Outcome coarray_diagnostics() {
  const KLevelParams four{{3, 3, 3, 4}};
  const auto klevel = build_klevel(four);
  const auto sn = build_super_nested(15, 16);
  const auto nested = build_nested(15, 16);
  std::string message;
  bool raised = false;
  try {
    lag_average(CovarianceEstimate::exact(analytic_covariance(ToneSet({{0.1, 1.0}}), klevel, 0.1)), klevel);
  } catch (const Error& e) {
    raised = e.kind() == ErrorKind::precondition;
    message = e.what();
  }
  const auto missing = difference_set(klevel).missing_lags(256);
  const bool lists_lag =
      raised && !missing.empty() && message.find(std::to_string(missing.front())) != std::string::npos;

  const ToneSet tones({{0.17, 1.0}, {-0.3, 0.4}});
  const auto sa = nest(lag_average(CovarianceEstimate::exact(analytic_covariance(tones, sn, 0.01)), sn), 0.0);
  const auto sb =
      nest(lag_average(CovarianceEstimate::exact(analytic_covariance(tones, nested, 0.01)), nested), 0.0);
  const bool contiguous = verify_contiguous_coarray(sn);
  const bool same_peak = sa.peak_bin() == sb.peak_bin();
  return {klevel.window_size() == 256 && lists_lag && contiguous && same_peak,
          "4-level (3,3,3,4) misses " + std::to_string(missing.size()) + " lags, error " +
              (lists_lag ? "lists them" : "missing") + "; super-nested contiguous " +
              (contiguous ? "yes" : "no") + ", peak bins " + std::to_string(sa.peak_bin()) + "/" +
              std::to_string(sb.peak_bin())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given (--cli)"};
  const fs::path root = fs::temp_directory_path() / "nestdop_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg = root / "cfg.json";
  std::ofstream(cfg) << R"({"P": 64, "tones": [{"frequency": 0.2, "power": 1}],
    "profile": {"frames": 8, "period_frames": 8}, "snapshots": 16, "seed": 5,
    "snr_list": [0, 20], "trials": 20, "welch": {"zero_fill": true},
    "output": {"formats": ["csv"]}})";
  std::vector<std::string> produced;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = root / ("run" + std::to_string(run));
    for (const char* cmd : {"simulate", "spectrogram", "compare", "mse"}) {
      const std::string line = "\"" + cli + "\" " + cmd + " --config \"" + cfg.string() +
                               "\" --out-dir \"" + out.string() + "\" > /dev/null 2>&1";
      if (std::system(line.c_str()) != 0) return {false, std::string("CLI run failed: ") + cmd};
    }
  }
  int files = 0, differ = 0;
  for (const auto& entry : fs::directory_iterator(root / "run0")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    const auto other = root / "run1" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differ;
  }
  fs::remove_all(root);
  return {files > 0 && differ == 0,
          std::to_string(files) + " CSV files compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) cli = argv[++i];
    else only.push_back(std::atoi(a.c_str()));
  }

  const std::vector<Criterion> criteria{
      {1, "nested coarray exhaustive", 10, nested_coarray_exhaustive},
      {2, "optimal nested vs divisor search", 30, nested_optimum_oracle},
      {3, "optimal K-level vs factorization search", 60, klevel_optimum_oracle},
      {4, "Toeplitz reconstruction exactness", 0, toeplitz_exactness},
      {5, "NESPRIT noiseless precision", 0, nesprit_precision},
      {6, "NEST dense-grid exactness", 0, nest_dense_grid},
      {7, "MSE versus SNR ordering", 300, mse_ordering},
      {8, "clutter suppression", 0, clutter_suppression},
      {9, "minimal-rate spectrogram", 120, minimal_rate_spectrogram},
      {10, "coarray failure diagnostics", 0, coarray_diagnostics},
      {11, "CLI determinism", 0, [&] { return cli_determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s <= 0 || secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << " [" << std::fixed << std::setprecision(2) << secs << " s";
    if (c.time_limit_s > 0) std::cout << " of " << c.time_limit_s << " s";
    std::cout << "]\n" << std::flush;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
