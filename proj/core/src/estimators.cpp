#include "nestdop/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "nestdop/error.hpp"
#include "nestdop/fft.hpp"

namespace nestdop {
namespace {

constexpr std::string_view kModule = "estimators";

long long centered_offset(std::size_t n) { return static_cast<long long>(n / 2); }

}  // namespace

GridSpectrum::GridSpectrum(std::vector<double> powers) : powers_(std::move(powers)) {
  if (powers_.empty()) throw_precondition(kModule, "spectrum must have at least one bin");
}

double GridSpectrum::frequency(std::size_t bin) const {
  const auto n = static_cast<double>(powers_.size());
  return static_cast<double>(static_cast<long long>(bin) - centered_offset(powers_.size())) / n;
}

std::size_t GridSpectrum::bin_of(double nu) const {
  const auto n = static_cast<long long>(powers_.size());
  auto k = static_cast<long long>(std::llround(wrap_frequency(nu) * static_cast<double>(n)));
  long long c = k + centered_offset(powers_.size());
  c = ((c % n) + n) % n;
  return static_cast<std::size_t>(c);
}

std::size_t GridSpectrum::peak_bin() const {
  return static_cast<std::size_t>(std::max_element(powers_.begin(), powers_.end()) -
                                  powers_.begin());
}

double GridSpectrum::total_power() const {
  return std::accumulate(powers_.begin(), powers_.end(), 0.0);
}

std::optional<SpectralLine> LineSpectrum::peak() const {
  if (lines.empty()) return std::nullopt;
  return *std::max_element(lines.begin(), lines.end(),
                           [](const auto& a, const auto& b) { return a.power < b.power; });
}

GridSpectrum LineSpectrum::rasterize(int window_size) const {
  GridSpectrum grid(std::vector<double>(static_cast<std::size_t>(2 * window_size - 1), 0.0));
  std::vector<double> powers = grid.powers();
  for (const auto& line : lines) powers[grid.bin_of(line.frequency)] += std::max(0.0, line.power);
  return GridSpectrum(std::move(powers));
}

GridSpectrum nest(const CoarraySignal& z, double lambda) {
  if (!(lambda >= 0.0)) throw_precondition(kModule, "NEST threshold lambda must be >= 0");
  const int p = z.window_size();
  const int n = 2 * p - 1;
  // values(i) holds lag i - (P-1); undo that shift with a phase ramp.
  const ComplexVector spectrum = forward_dft(z.values());
  std::vector<double> powers(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Complex shift = std::polar(1.0, kTwoPi * static_cast<double>(k) * (p - 1) / n);
    const double value = (shift * spectrum(k)).real() / n;
    const int centered = (k + p - 1) % n;
    powers[static_cast<std::size_t>(centered)] = std::max(value - lambda, 0.0);
  }
  return GridSpectrum(std::move(powers));
}

double estimate_noise_floor(std::span<const double> eigenvalues, int model_order) {
  const auto total = static_cast<int>(eigenvalues.size());
  if (model_order < 0 || model_order >= total) {
    throw_precondition(kModule, "noise floor needs 0 <= M < P, got M = " +
                                    std::to_string(model_order));
  }
  double sum = 0.0;
  for (int i = model_order; i < total; ++i) sum += eigenvalues[static_cast<std::size_t>(i)];
  return std::max(0.0, sum / (total - model_order));
}

LineSpectrum nesprit(const CoarraySignal& z, const NespritOptions& options) {
  if (!(options.lambda >= 0.0)) throw_precondition(kModule, "NESPRIT threshold must be >= 0");
  const int p = z.window_size();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(build_toeplitz(z));
  if (eig.info() != Eigen::Success)
    throw_precondition(kModule, "eigendecomposition of the Toeplitz matrix failed");
  // Ascending from Eigen; reorder descending, ties by original index.
  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return eig.eigenvalues()(a) > eig.eigenvalues()(b);
  });
  std::vector<double> values(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) values[static_cast<std::size_t>(i)] = eig.eigenvalues()(order[i]);

  int m = 0;
  if (options.model_order) {
    m = *options.model_order;
    if (m < 0) throw_precondition(kModule, "model order must be >= 0");
  } else {
    m = static_cast<int>(std::count_if(values.begin(), values.end(),
                                       [&](double d) { return d - options.lambda > 0.0; }));
  }
  if (m > p - 1) {
    throw_precondition(kModule, "model order M = " + std::to_string(m) +
                                    " exceeds P - 1 = " + std::to_string(p - 1) +
                                    "; raise lambda or fix the model order");
  }

  LineSpectrum out;
  out.model_order = m;
  out.noise_estimate = estimate_noise_floor(values, m);
  if (m == 0) return out;

  ComplexMatrix signal_space(p, m);
  for (int i = 0; i < m; ++i) signal_space.col(i) = eig.eigenvectors().col(order[i]);

  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> upper;
  upper.setThreshold(options.rcond);
  upper.compute(signal_space.topRows(p - 1));
  const ComplexMatrix rotation = upper.solve(signal_space.bottomRows(p - 1));
  Eigen::ComplexEigenSolver<ComplexMatrix> rot_eig(rotation, false);
  if (rot_eig.info() != Eigen::Success)
    throw_precondition(kModule, "eigendecomposition of the rotation operator failed");

  std::vector<double> freqs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    freqs[static_cast<std::size_t>(i)] = wrap_frequency(std::arg(rot_eig.eigenvalues()(i)) / kTwoPi);
  std::sort(freqs.begin(), freqs.end());

  const int lags = 2 * p - 1;
  ComplexMatrix vandermonde(lags, m);
  for (int col = 0; col < m; ++col) {
    for (int row = 0; row < lags; ++row)
      vandermonde(row, col) = std::polar(1.0, kTwoPi * freqs[static_cast<std::size_t>(col)] * (row - (p - 1)));
  }
  ComplexVector rhs = z.values();
  if (options.subtract_noise_floor) rhs(p - 1) -= out.noise_estimate;

  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> fit;
  fit.setThreshold(options.rcond);
  fit.compute(vandermonde);
  const ComplexVector powers = fit.solve(rhs);

  out.lines.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out.lines.push_back({freqs[static_cast<std::size_t>(i)], powers(i).real()});
  return out;
}

GridSpectrum welch(const ComplexMatrix& uniform, const WelchOptions& options) {
  const auto p = static_cast<int>(uniform.cols());
  const int length = options.segment_length == 0 ? p : options.segment_length;
  if (length < 1 || length > p) {
    throw_precondition(kModule, "Welch segment length " + std::to_string(length) +
                                    " must lie in [1, P = " + std::to_string(p) + "]");
  }
  if (!(options.overlap >= 0.0 && options.overlap < 1.0))
    throw_precondition(kModule, "Welch overlap must lie in [0, 1)");
  if (uniform.rows() < 1) throw_precondition(kModule, "Welch needs at least one snapshot");

  const auto window = make_window(options.window, static_cast<std::size_t>(length));
  const double window_energy = std::accumulate(window.begin(), window.end(), 0.0,
                                               [](double acc, double w) { return acc + w * w; });
  const int hop = std::max(1, static_cast<int>(std::lround(length * (1.0 - options.overlap))));

  std::vector<double> accum(static_cast<std::size_t>(length), 0.0);
  std::size_t segments = 0;
  ComplexVector segment(length);
  for (Eigen::Index row = 0; row < uniform.rows(); ++row) {
    for (int start = 0; start + length <= p; start += hop) {
      for (int i = 0; i < length; ++i) segment(i) = uniform(row, start + i) * window[static_cast<std::size_t>(i)];
      const ComplexVector spec = forward_dft(segment);
      for (int k = 0; k < length; ++k) {
        const auto c = static_cast<std::size_t>((k + length / 2) % length);
        accum[c] += std::norm(spec(k)) / window_energy;
      }
      ++segments;
    }
  }
  for (double& v : accum) v /= static_cast<double>(segments);
  return GridSpectrum(std::move(accum));
}

ComplexMatrix zero_filled(const SlowTimeSnapshots& snapshots) {
  const auto& pattern = snapshots.pattern();
  ComplexMatrix filled = ComplexMatrix::Zero(snapshots.snapshot_count(), pattern.window_size());
  for (std::size_t n = 0; n < pattern.size(); ++n) {
    const int slot = pattern.slots()[n];
    if (slot <= pattern.window_size())
      filled.col(slot - 1) = snapshots.data().col(static_cast<Eigen::Index>(n));
  }
  return filled;
}

GridSpectrum welch(const SlowTimeSnapshots& snapshots, const WelchOptions& options,
                   bool zero_fill) {
  const auto& pattern = snapshots.pattern();
  if (pattern.is_uniform()) return welch(snapshots.data(), options);
  if (!zero_fill) {
    throw_precondition(kModule, "Welch requires uniformly sampled slow-time data (a standard "
                                "pattern); the " + std::string(to_string(pattern.family())) +
                                    " pattern uses " + std::to_string(pattern.size()) + " of " +
                                    std::to_string(pattern.window_size()) +
                                    " slots. Enable zero-filling to run it anyway");
  }
  const ComplexMatrix filled = zero_filled(snapshots);
  const auto used = std::count_if(pattern.slots().begin(), pattern.slots().end(),
                                  [&](int slot) { return slot <= pattern.window_size(); });
  auto spectrum = welch(filled, options);
  std::vector<double> scaled = spectrum.powers();
  for (double& v : scaled) v *= static_cast<double>(pattern.window_size()) / static_cast<double>(used);
  return GridSpectrum(std::move(scaled));
}

std::vector<double> to_db(std::span<const double> powers, double floor_db) {
  const double peak = powers.empty() ? 0.0 : *std::max_element(powers.begin(), powers.end());
  std::vector<double> out(powers.size(), floor_db);
  if (!(peak > 0.0)) return out;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] > 0.0) out[i] = std::max(floor_db, 10.0 * std::log10(powers[i] / peak));
  }
  return out;
}

}  // namespace nestdop
