#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nestdop/array_design.hpp"
#include "nestdop/coarray.hpp"
#include "nestdop/estimators.hpp"
#include "nestdop/filters.hpp"
#include "nestdop/signal_model.hpp"
#include "nestdop/spectrogram.hpp"

namespace nestdop {

enum class Estimator { nest, nesprit, welch };

std::string_view to_string(Estimator estimator);
Estimator parse_estimator(std::string_view name);

/// Correlation-domain processing between lag averaging and estimation.
struct ProcessingConfig {
  bool remove_mean = true;
  std::optional<ClutterFilter> clutter_filter;
  std::optional<WindowKind> apodization;

  std::string describe() const;
};

/// Thresholds calibrated on the synthetic pulsatile suite (unit peak power,
/// SNR 20 dB, P = 256, Q = 33).
inline constexpr double kDefaultNestLambda = 0.05;
inline constexpr double kDefaultNespritLambda = 20.0;

struct EstimatorSettings {
  EstimatorSettings() { nesprit.lambda = kDefaultNespritLambda; }

  double nest_lambda = kDefaultNestLambda;
  NespritOptions nesprit;
  WelchOptions welch;
  /// Allow Welch on sparse patterns by zero-filling the missing slots.
  bool welch_zero_fill = false;
};

/// covariance -> lag average -> clutter filter -> apodization.
CoarraySignal process_coarray(const CovarianceEstimate& cov, const EmissionPattern& pattern,
                              const ProcessingConfig& processing);
CoarraySignal process_coarray(const SlowTimeSnapshots& snapshots,
                              const ProcessingConfig& processing);

/// Runs one estimator on one CPI and returns a grid spectrum: 2P-1 bins for
/// NEST and NESPRIT (lines rasterized), the Welch segment length for Welch.
/// Welch applies the clutter filter in the time domain and uses its own
/// window instead of correlation-domain apodization.
GridSpectrum estimate_frame(const SlowTimeSnapshots& snapshots, Estimator estimator,
                            const ProcessingConfig& processing,
                            const EstimatorSettings& settings);

/// Filters each snapshot row along slow time (uniform data only).
ComplexMatrix filter_rows(const ComplexMatrix& uniform, const ClutterFilter& filter);

/// One spectrum per frame, frames processed in parallel, output in frame
/// order. Frame f is stamped with CPI index f * cpis_per_frame.
Spectrogram run_spectrogram(const std::vector<SlowTimeSnapshots>& frames, Estimator estimator,
                            const ProcessingConfig& processing,
                            const EstimatorSettings& settings, int cpis_per_frame = 1);

struct RidgeStats {
  /// Fraction of frames whose ridge is within `tolerance_bins` dense bins.
  double hit_rate = 0.0;
  double mean_error_bins = 0.0;
  double max_error_bins = 0.0;
};

/// Compares the spectrogram ridge with the ground-truth peak frequency of
/// each frame. Errors are measured in dense-grid bins, 1/(2P-1).
RidgeStats ridge_stats(const Spectrogram& spectrogram, const std::vector<double>& truth,
                       int window_size, double tolerance_bins = 1.0);

/// Energy outside |nu - nu_m| <= halfwidth around the frames' blood tones,
/// as a fraction of total energy, in dB.
double artifact_energy_db(const Spectrogram& spectrogram, const PulsatileProfile& truth,
                          double halfwidth);

// ---- MSE versus SNR -------------------------------------------------------

struct MseConfig {
  double frequency = 0.2;
  int n1 = 3;
  int n2 = 2;
  int snapshots = 200;
  int trials = 1000;
  std::vector<double> snr_db{-20, -15, -10, -5, 0, 5, 10, 15, 20, 25, 30};
  std::uint64_t seed = 1;
  double nest_lambda = 0.0;
  /// Fixed model order for NESPRIT (a single tone); nullopt uses lambda.
  std::optional<int> nesprit_order = 1;
  double nesprit_lambda = 0.0;
  bool remove_mean = false;
  /// Exact covariances instead of sampled snapshots.
  bool analytic = false;
};

struct MseRow {
  double snr_db = 0.0;
  Estimator estimator = Estimator::nest;
  double mse = 0.0;
  int trials = 0;
};

/// Monte Carlo MSE of the peak-frequency estimate of a single tone. NEST and
/// NESPRIT see the nested pattern, Welch sees a fully sampled window of the
/// same length. Rows are ordered by SNR then estimator.
std::vector<MseRow> run_mse(const MseConfig& config);

// ---- Comparison -----------------------------------------------------------

struct EstimatorReport {
  Estimator estimator = Estimator::nest;
  Spectrogram spectrogram;
  RidgeStats ridge;
  double artifact_db = 0.0;
};

struct CompareReport {
  std::vector<EstimatorReport> estimators;
  const EstimatorReport* find(Estimator e) const;
};

/// Runs every estimator on the same frames (Welch zero-fills sparse data).
CompareReport run_compare(const std::vector<SlowTimeSnapshots>& frames,
                          const PulsatileProfile& truth, const std::vector<Estimator>& estimators,
                          const ProcessingConfig& processing, const EstimatorSettings& settings,
                          double support_halfwidth);

// ---- Physical units -------------------------------------------------------

struct PhysicalUnits {
  double center_frequency = 3.5e6;  ///< f0 [Hz]
  double prf = 5e3;                 ///< pulse repetition frequency [Hz]
  double sound_speed = 1540.0;      ///< c [m/s]
};

/// nu = f_D / prf with f_D = -2 v f0 / c (v axial, positive away from the probe).
double velocity_to_frequency(double axial_velocity, const PhysicalUnits& units);
double frequency_to_velocity(double nu, const PhysicalUnits& units);

// ---- Configuration ----------------------------------------------------------

struct PatternSpec {
  PatternFamily family = PatternFamily::nested;
  bool optimal = true;
  GapPreference preference = GapPreference::fewer_larger_gaps;
  int n1 = 0;
  int n2 = 0;
  std::vector<int> levels;
};

EmissionPattern build_pattern(const PatternSpec& spec, int window_size);

struct OutputSpec {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json", "pgm"};
};

/// Parsed JSON experiment document. See README for the schema.
struct ExperimentConfig {
  int window_size = 256;
  PatternSpec pattern;
  PhysicalUnits units;
  ToneSet tones;
  std::optional<PulsatileProfile> profile;
  int snapshots = 33;
  double snr_db = 20.0;
  std::optional<double> noise_power;
  std::vector<double> snr_list{-20, -15, -10, -5, 0, 5, 10, 15, 20, 25, 30};
  int trials = 1000;
  bool analytic = false;
  ProcessingConfig processing;
  EstimatorSettings settings;
  std::vector<Estimator> estimators{Estimator::nest, Estimator::nesprit, Estimator::welch};
  double support_halfwidth = 0.0;  ///< 0 selects 2/P
  std::uint64_t seed = 1;
  OutputSpec output;

  /// Top-level keys present in the parsed document.
  std::vector<std::string> present;

  /// Noise variance implied by noise_power or snr_db against `signal_power`.
  double noise_for(double signal_power) const;
  bool has(std::string_view key) const;
};

/// Parses and validates a config document. `base_dir` resolves relative
/// profile paths. Throws Error(config) naming the offending field.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace nestdop
