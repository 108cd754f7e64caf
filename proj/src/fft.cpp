#include "degenspec/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace degenspec::fft {

namespace {

// the FFTW planner is not thread-safe; execution is
std::mutex planner_mutex;

void transform(const TorusGrid& grid, std::vector<std::complex<double>>& data, int sign) {
  if (data.size() != grid.size()) throw std::invalid_argument("fft: data size does not match the grid");
  std::vector<int> dims(static_cast<std::size_t>(grid.dim()), grid.points_per_axis());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft(grid.dim(), dims.data(), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fft: planner failed");
  fftw_execute_dft(plan, buf, buf);
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan);
}

}  // namespace

void forward(const TorusGrid& grid, std::vector<std::complex<double>>& data) {
  transform(grid, data, FFTW_FORWARD);
}

void backward(const TorusGrid& grid, std::vector<std::complex<double>>& data) {
  transform(grid, data, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (auto& z : data) z *= inv;
}

}  // namespace degenspec::fft
