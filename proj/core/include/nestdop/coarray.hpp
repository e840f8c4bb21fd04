#pragma once

#include <span>
#include <vector>

#include "nestdop/array_design.hpp"
#include "nestdop/filters.hpp"
#include "nestdop/signal_model.hpp"
#include "nestdop/types.hpp"

namespace nestdop {

/// Sample covariance of the sparse slow-time vector.
struct CovarianceEstimate {
  ComplexMatrix matrix;
  /// Snapshots averaged; 0 marks an exact (analytic) covariance.
  int snapshots_used = 0;
  bool mean_removed = false;

  static CovarianceEstimate exact(ComplexMatrix matrix) { return {std::move(matrix), 0, false}; }
};

/// (1/Q) sum_k y_k y_k^H, optionally after subtracting the mean snapshot,
/// then symmetrized to (R + R^H)/2.
CovarianceEstimate estimate_covariance(const SlowTimeSnapshots& snapshots, bool remove_mean);

/// Autocorrelation over lags -(P-1)..(P-1). Lag l is stored at index l + P - 1.
class CoarraySignal {
 public:
  CoarraySignal(int window_size, ComplexVector values);
  /// All-zero signal.
  explicit CoarraySignal(int window_size);

  int window_size() const noexcept { return window_size_; }
  int max_lag() const noexcept { return window_size_ - 1; }
  Eigen::Index length() const noexcept { return values_.size(); }
  const ComplexVector& values() const noexcept { return values_; }

  Complex operator()(int lag) const { return values_(lag + window_size_ - 1); }
  Complex& operator()(int lag) { return values_(lag + window_size_ - 1); }

  /// max_l |z(-l) - conj z(l)|, relative to |z(0)| when that is nonzero.
  double symmetry_error() const;

 private:
  int window_size_;
  ComplexVector values_;
};

/// Averages the covariance entries sharing each lag. Throws an Error
/// listing the missing lags when the pattern's coarray has holes.
CoarraySignal lag_average(const CovarianceEstimate& cov, const EmissionPattern& pattern);
CoarraySignal lag_average(const CovarianceEstimate& cov, const DifferenceSet& diffs,
                          int window_size);

/// P x P Toeplitz matrix with entry (i, j) = z(i - j).
ComplexMatrix build_toeplitz(const CoarraySignal& z);

/// Filters the process whose autocorrelation is z: z * h * conj(h[-n]),
/// linear convolution truncated back to lags -(P-1)..(P-1). IIR filters
/// must be stable.
CoarraySignal clutter_filter(const CoarraySignal& z, const ClutterFilter& filter);

/// Multiplies z by the window's deterministic autocorrelation. The window
/// must have length P.
CoarraySignal apodize(const CoarraySignal& z, std::span<const double> window);

/// sum_n a[n] a[n + l] for l = -(P-1)..(P-1), stored like a CoarraySignal.
std::vector<double> window_autocorrelation(std::span<const double> window);

}  // namespace nestdop
