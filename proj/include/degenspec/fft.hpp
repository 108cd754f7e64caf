#pragma once

#include <complex>
#include <vector>

#include "degenspec/torus.hpp"

namespace degenspec::fft {

/// In-place d-dimensional DFT with kernel exp(-2 pi i k.n / L), unnormalised.
void forward(const TorusGrid& grid, std::vector<std::complex<double>>& data);
/// Inverse DFT including the 1/N factor.
void backward(const TorusGrid& grid, std::vector<std::complex<double>>& data);

}  // namespace degenspec::fft
