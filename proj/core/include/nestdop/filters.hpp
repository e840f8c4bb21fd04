#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "nestdop/types.hpp"

namespace nestdop {

struct FirFilter {
  std::vector<Complex> taps;
};

/// Direct-form rational filter b(z)/a(z) with real coefficients, a[0] != 0.
struct IirFilter {
  std::vector<double> b;
  std::vector<double> a;
};

using ClutterFilter = std::variant<FirFilter, IirFilter>;

/// Digital Butterworth high-pass by bilinear transform with prewarping.
/// `cutoff` is the -3 dB point in cycles per PRI, 0 < cutoff < 1/2.
IirFilter butterworth_highpass(int order, double cutoff);

std::vector<Complex> poles(const IirFilter& filter);
/// Largest pole magnitude; 0 for a pure FIR denominator.
double pole_radius(const IirFilter& filter);
bool is_stable(const IirFilter& filter);

std::vector<double> impulse_response(const IirFilter& filter, std::size_t length);

/// H(exp(j 2 pi nu)).
Complex frequency_response(const ClutterFilter& filter, double nu);

/// Deterministic autocorrelation g = h * conj(h[-n]) over lags
/// -max_lag..max_lag, stored at index lag + max_lag.
struct CorrelationKernel {
  std::vector<Complex> values;
  int max_lag = 0;
  /// Length of impulse response used (IIR only; FIR uses all taps).
  std::size_t response_length = 0;
  /// Estimated bound on the error from truncating an IIR response.
  double truncation_bound = 0.0;

  Complex at(int lag) const { return values[static_cast<std::size_t>(lag + max_lag)]; }
};

/// IIR responses are evaluated to max(4P, L) samples, where L makes the
/// geometric tail bound from the pole radius negligible (< 1e-15).
CorrelationKernel correlation_kernel(const ClutterFilter& filter, int window_size);

enum class WindowKind { rectangular, hamming, hann };

WindowKind parse_window(std::string_view name);
std::string_view to_string(WindowKind kind);
std::vector<double> make_window(WindowKind kind, std::size_t length);

}  // namespace nestdop
