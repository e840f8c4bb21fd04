#pragma once

#include "nestdop/types.hpp"

namespace nestdop {

/// Forward DFT X[k] = sum_n x[n] exp(-2 pi j k n / N), any length, unscaled.
ComplexVector forward_dft(const ComplexVector& input);

}  // namespace nestdop
