#include "nestdop/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "nestdop/error.hpp"

namespace nestdop {
namespace {

constexpr std::string_view kModule = "coarray";

// Coefficients of prod_k (1 - r_k x), lowest order first.
std::vector<Complex> expand_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

template <typename T>
Complex evaluate(const std::vector<T>& coeffs, Complex zinv) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * zinv + Complex(*it);
  return acc;
}

}  // namespace

IirFilter butterworth_highpass(int order, double cutoff) {
  if (order < 1) throw_precondition(kModule, "Butterworth order must be >= 1");
  if (!(cutoff > 0.0 && cutoff < 0.5))
    throw_precondition(kModule, "Butterworth cutoff must lie in (0, 1/2) cycles per PRI");

  const double warped = 2.0 * std::tan(kPi * cutoff);
  std::vector<Complex> digital_poles;
  digital_poles.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const Complex unit = std::polar(1.0, kPi * (2.0 * k + order + 1) / (2.0 * order));
    const Complex analog = warped / unit;
    digital_poles.push_back((2.0 + analog) / (2.0 - analog));
  }
  const auto a_complex = expand_roots(digital_poles);
  const auto b_complex = expand_roots(std::vector<Complex>(static_cast<std::size_t>(order), 1.0));

  IirFilter filter;
  for (const auto& c : a_complex) filter.a.push_back(c.real());
  // Unit gain at Nyquist, z^-1 = -1.
  const double gain = std::abs(evaluate(filter.a, Complex(-1.0))) /
                      std::abs(evaluate(b_complex, Complex(-1.0)));
  for (const auto& c : b_complex) filter.b.push_back(gain * c.real());
  return filter;
}

std::vector<Complex> poles(const IirFilter& filter) {
  if (filter.a.empty() || filter.a.front() == 0.0)
    throw_precondition(kModule, "IIR denominator must have a nonzero leading coefficient");
  std::size_t degree = filter.a.size() - 1;
  while (degree > 0 && filter.a[degree] == 0.0) --degree;
  if (degree == 0) return {};
  // Companion matrix of z^d + (a1/a0) z^(d-1) + ... + ad/a0.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(degree),
                                                    static_cast<Eigen::Index>(degree));
  for (std::size_t i = 0; i < degree; ++i)
    companion(0, static_cast<Eigen::Index>(i)) = -filter.a[i + 1] / filter.a[0];
  for (std::size_t i = 1; i < degree; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    out.push_back(solver.eigenvalues()(i));
  return out;
}

double pole_radius(const IirFilter& filter) {
  double r = 0.0;
  for (const auto& p : poles(filter)) r = std::max(r, std::abs(p));
  return r;
}

bool is_stable(const IirFilter& filter) { return pole_radius(filter) < 1.0; }

std::vector<double> impulse_response(const IirFilter& filter, std::size_t length) {
  if (filter.a.empty() || filter.a.front() == 0.0)
    throw_precondition(kModule, "IIR denominator must have a nonzero leading coefficient");
  std::vector<double> h(length, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    double acc = n < filter.b.size() ? filter.b[n] : 0.0;
    for (std::size_t k = 1; k < filter.a.size() && k <= n; ++k) acc -= filter.a[k] * h[n - k];
    h[n] = acc / filter.a.front();
  }
  return h;
}

Complex frequency_response(const ClutterFilter& filter, double nu) {
  const Complex zinv = std::polar(1.0, -kTwoPi * nu);
  if (const auto* fir = std::get_if<FirFilter>(&filter)) return evaluate(fir->taps, zinv);
  const auto& iir = std::get<IirFilter>(filter);
  return evaluate(iir.b, zinv) / evaluate(iir.a, zinv);
}

CorrelationKernel correlation_kernel(const ClutterFilter& filter, int window_size) {
  CorrelationKernel kernel;
  kernel.max_lag = 2 * (window_size - 1);

  std::vector<Complex> h;
  if (const auto* fir = std::get_if<FirFilter>(&filter)) {
    if (fir->taps.empty()) throw_precondition(kModule, "FIR filter has no taps");
    h = fir->taps;
    kernel.response_length = h.size();
  } else {
    const auto& iir = std::get<IirFilter>(filter);
    const double radius = pole_radius(iir);
    if (!(radius < 1.0)) {
      throw_precondition(kModule, "IIR clutter filter is unstable (pole radius " +
                                      std::to_string(radius) + " >= 1)");
    }
    std::size_t length = 4 * static_cast<std::size_t>(window_size);
    if (radius > 0.0) {
      constexpr std::size_t kMaxLength = std::size_t{1} << 20;
      const double needed = std::log(1e-15 * (1.0 - radius)) / std::log(radius);
      if (needed > static_cast<double>(length))
        length = std::min(kMaxLength, static_cast<std::size_t>(std::ceil(needed)));
    }
    const auto real_h = impulse_response(iir, length);
    h.assign(real_h.begin(), real_h.end());
    kernel.response_length = length;
    double l1 = 0.0;
    for (double v : real_h) l1 += std::abs(v);
    kernel.truncation_bound =
        radius > 0.0 ? l1 * std::pow(radius, static_cast<double>(length)) / (1.0 - radius) : 0.0;
  }

  const int n = static_cast<int>(h.size());
  kernel.values.assign(static_cast<std::size_t>(2 * kernel.max_lag + 1), 0.0);
  for (int lag = 0; lag <= std::min(kernel.max_lag, n - 1); ++lag) {
    Complex acc = 0.0;
    for (int i = lag; i < n; ++i) acc += h[i] * std::conj(h[i - lag]);
    kernel.values[static_cast<std::size_t>(kernel.max_lag + lag)] = acc;
    kernel.values[static_cast<std::size_t>(kernel.max_lag - lag)] = std::conj(acc);
  }
  return kernel;
}

WindowKind parse_window(std::string_view name) {
  for (auto k : {WindowKind::rectangular, WindowKind::hamming, WindowKind::hann}) {
    if (to_string(k) == name) return k;
  }
  throw_config(kModule, "unknown window '" + std::string(name) +
                            "' (expected rectangular, hamming or hann)");
}

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::hamming: return "hamming";
    case WindowKind::hann: return "hann";
  }
  return "unknown";
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::rectangular || length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double c = std::cos(kTwoPi * static_cast<double>(n) / denom);
    w[n] = kind == WindowKind::hamming ? 0.54 - 0.46 * c : 0.5 - 0.5 * c;
  }
  return w;
}

}  // namespace nestdop
