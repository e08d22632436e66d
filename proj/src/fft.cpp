#include "divfree/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace divfree {

namespace fft_detail {

namespace {

// In-place, unaligned plans: results do not depend on buffer address, which
// keeps transforms bitwise reproducible across allocations and threads.
fftw_plan cached_plan(const Grid& grid, int sign) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(grid.nx(), grid.ny(), sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  std::vector<Complex> scratch(grid.size());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_2d(grid.ny(), grid.nx(), p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(key, plan);
  return plan;
}

void execute(const Grid& grid, std::span<Complex> data, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cached_plan(grid, sign), p, p);
}

}  // namespace

void forward_inplace(const Grid& grid, std::span<Complex> data) { execute(grid, data, FFTW_FORWARD); }
void backward_inplace(const Grid& grid, std::span<Complex> data) { execute(grid, data, FFTW_BACKWARD); }

}  // namespace fft_detail

SpectralField forward_fft2(const ScalarField& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  fft_detail::forward_inplace(f.grid(), data);
  return {f.grid(), std::move(data)};
}

SpectralVector forward_fft2(const VectorField2& w) { return {forward_fft2(w.u()), forward_fft2(w.v())}; }

std::vector<Complex> inverse_fft2_complex(const SpectralField& f) {
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  fft_detail::backward_inplace(f.grid(), data);
  const double scale = 1.0 / static_cast<double>(f.grid().size());
  for (auto& c : data) c *= scale;
  return data;
}

ScalarField inverse_fft2(const SpectralField& f) {
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  fft_detail::backward_inplace(f.grid(), data);
  const double scale = 1.0 / static_cast<double>(f.grid().size());
  std::vector<double> values(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) values[i] = data[i].real() * scale;
  return {f.grid(), std::move(values)};
}

VectorField2 inverse_fft2(const SpectralVector& w) { return {inverse_fft2(w.u), inverse_fft2(w.v)}; }

}  // namespace divfree
