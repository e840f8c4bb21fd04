#include "nestdop/fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace nestdop {
namespace {

// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ComplexVector forward_dft(const ComplexVector& input) {
  const int n = static_cast<int>(input.size());
  if (n == 0) return {};
  ComplexVector in = input;
  ComplexVector out(n);
  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace nestdop
