#include "nestdop/coarray.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nestdop/error.hpp"

namespace nestdop {
namespace {

constexpr std::string_view kModule = "coarray";

std::string describe_missing(const std::vector<int>& missing) {
  std::ostringstream os;
  os << "coarray has " << missing.size() << " missing lag" << (missing.size() == 1 ? "" : "s")
     << ": ";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 16);
  for (std::size_t i = 0; i < shown; ++i) os << (i ? ", " : "") << missing[i];
  if (shown < missing.size()) os << ", ...";
  os << "; lag averaging needs every lag in [-(P-1), P-1]";
  return os.str();
}

}  // namespace

CovarianceEstimate estimate_covariance(const SlowTimeSnapshots& snapshots, bool remove_mean) {
  const int q = snapshots.snapshot_count();
  if (remove_mean && q < 2)
    throw_precondition(kModule, "mean removal needs at least Q = 2 snapshots");

  ComplexMatrix centered = snapshots.data();
  if (remove_mean) {
    const Eigen::RowVectorXcd mean = centered.colwise().mean();
    centered.rowwise() -= mean;
  }
  // Rows are y_k^T, so sum_k y_k y_k^H = X^T conj(X).
  ComplexMatrix r = centered.transpose() * centered.conjugate();
  r /= static_cast<double>(q);
  ComplexMatrix sym = 0.5 * (r + r.adjoint());
  return {std::move(sym), q, remove_mean};
}

CoarraySignal::CoarraySignal(int window_size, ComplexVector values)
    : window_size_(window_size), values_(std::move(values)) {
  if (window_size_ < 1) throw_precondition(kModule, "coarray window size must be positive");
  if (values_.size() != 2 * window_size_ - 1) {
    throw_precondition(kModule, "coarray signal needs 2P-1 = " +
                                    std::to_string(2 * window_size_ - 1) + " values, got " +
                                    std::to_string(values_.size()));
  }
}

CoarraySignal::CoarraySignal(int window_size)
    : CoarraySignal(window_size, ComplexVector::Zero(2 * std::max(window_size, 1) - 1)) {}

double CoarraySignal::symmetry_error() const {
  double err = 0.0;
  for (int lag = 0; lag <= max_lag(); ++lag)
    err = std::max(err, std::abs((*this)(-lag) - std::conj((*this)(lag))));
  const double scale = std::abs((*this)(0));
  return scale > 0.0 ? err / scale : err;
}

CoarraySignal lag_average(const CovarianceEstimate& cov, const EmissionPattern& pattern) {
  if (static_cast<std::size_t>(cov.matrix.rows()) != pattern.size())
    throw_precondition(kModule, "covariance size does not match the emission pattern");
  return lag_average(cov, difference_set(pattern), pattern.window_size());
}

CoarraySignal lag_average(const CovarianceEstimate& cov, const DifferenceSet& diffs,
                          int window_size) {
  const auto missing = diffs.missing_lags(window_size);
  if (!missing.empty()) throw_precondition(kModule, describe_missing(missing));
  if (cov.matrix.rows() != cov.matrix.cols())
    throw_precondition(kModule, "covariance must be square");

  const Eigen::Index n = cov.matrix.rows();
  const Complex* vec = cov.matrix.data();  // column-major storage is vec()
  CoarraySignal z(window_size);
  for (std::size_t i = 0; i < diffs.unique_lags.size(); ++i) {
    const int lag = diffs.unique_lags[i];
    if (std::abs(lag) > window_size - 1) continue;
    Complex acc = 0.0;
    for (int idx : diffs.index_sets[i]) {
      if (idx >= n * n) throw_precondition(kModule, "difference set does not match covariance");
      acc += vec[idx];
    }
    z(lag) = acc / static_cast<double>(diffs.index_sets[i].size());
  }
  return z;
}

ComplexMatrix build_toeplitz(const CoarraySignal& z) {
  const int p = z.window_size();
  ComplexMatrix r(p, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) r(i, j) = z(i - j);
  }
  return r;
}

CoarraySignal clutter_filter(const CoarraySignal& z, const ClutterFilter& filter) {
  const auto kernel = correlation_kernel(filter, z.window_size());
  const int max_lag = z.max_lag();
  CoarraySignal out(z.window_size());
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    Complex acc = 0.0;
    // out(l) = sum_m z(m) g(l - m); |l - m| <= 2(P-1) always holds.
    for (int m = -max_lag; m <= max_lag; ++m) acc += z(m) * kernel.at(lag - m);
    out(lag) = acc;
  }
  return out;
}

std::vector<double> window_autocorrelation(std::span<const double> window) {
  const int p = static_cast<int>(window.size());
  std::vector<double> r(static_cast<std::size_t>(2 * p - 1), 0.0);
  for (int lag = 0; lag < p; ++lag) {
    double acc = 0.0;
    for (int n = 0; n + lag < p; ++n) acc += window[n] * window[n + lag];
    r[static_cast<std::size_t>(p - 1 + lag)] = acc;
    r[static_cast<std::size_t>(p - 1 - lag)] = acc;
  }
  return r;
}

CoarraySignal apodize(const CoarraySignal& z, std::span<const double> window) {
  if (static_cast<int>(window.size()) != z.window_size()) {
    throw_precondition(kModule, "apodization window length " + std::to_string(window.size()) +
                                    " must equal the window size P = " +
                                    std::to_string(z.window_size()));
  }
  const auto ra = window_autocorrelation(window);
  ComplexVector values = z.values();
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) *= ra[static_cast<std::size_t>(i)];
  return CoarraySignal(z.window_size(), std::move(values));
}

}  // namespace nestdop
