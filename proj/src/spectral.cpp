#include "sdol/spectral.hpp"

#include <algorithm>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sdol {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

void check_alignment(const std::complex<double>* in, const std::complex<double>* out) {
  if (in == out) throw std::invalid_argument("SpectralGrid: transforms are out-of-place");
  if (fftw_alignment_of(reinterpret_cast<double*>(const_cast<std::complex<double>*>(in))) != 0 ||
      fftw_alignment_of(reinterpret_cast<double*>(const_cast<std::complex<double>*>(out))) != 0)
    throw std::invalid_argument("SpectralGrid: buffers must come from FftwAllocator");
}

}  // namespace

SpectralGrid::SpectralGrid(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const int n = grid_.points;
  scratch_.resize(grid_.size());
  scratch2_.resize(grid_.size());
  {
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_2d(n, n, as_fftw(scratch_.data()), as_fftw(scratch2_.data()),
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_2d(n, n, as_fftw(scratch_.data()), as_fftw(scratch2_.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("SpectralGrid: FFTW planning failed");

  const double dk = 2.0 * std::numbers::pi / grid_.side;
  std::vector<double> k(n);
  kd_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : i - n;
    k[i] = dk * m;
    kd_[i] = (i == n / 2) ? 0.0 : k[i];
  }
  k2_.resize(grid_.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k2_[static_cast<std::size_t>(i) * n + j] = k[i] * k[i] + k[j] * k[j];
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(forward_plan_);
  if (backward_plan_) fftw_destroy_plan(backward_plan_);
}

// Sample points are offset by half a cell from the FFT origin. That offset is a
// pure phase per mode, which cancels in every operator used here (multipliers
// in k-space followed by the inverse transform), so it is not applied.
void SpectralGrid::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  check_alignment(in.data(), out.data());
  fftw_execute_dft(forward_plan_, as_fftw(in.data()), as_fftw(out.data()));
}

void SpectralGrid::backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  check_alignment(in.data(), out.data());
  fftw_execute_dft(backward_plan_, as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(size());
  for (auto& v : out) v *= scale;
}

void SpectralGrid::gradient(std::span<const std::complex<double>> f, std::span<std::complex<double>> dfdx,
                            std::span<std::complex<double>> dfdy) const {
  const int n = grid_.points;
  forward(f, scratch_);
  const std::complex<double> I(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(i) * n + j;
      scratch2_[idx] = I * ky(j) * scratch_[idx];
      scratch_[idx] *= I * kx(i);
    }
  backward(scratch_, dfdx);
  backward(scratch2_, dfdy);
}

void SpectralGrid::apply_kinetic(std::span<const std::complex<double>> f, std::span<std::complex<double>> out) const {
  forward(f, scratch_);
  for (std::size_t idx = 0; idx < size(); ++idx) scratch_[idx] *= kinetic_prefactor * k2_[idx];
  backward(scratch_, out);
}

double SpectralGrid::kinetic_energy(std::span<const std::complex<double>> f) const {
  forward(f, scratch_);
  double sum = 0;
  for (std::size_t idx = 0; idx < size(); ++idx) sum += k2_[idx] * std::norm(scratch_[idx]);
  // Parseval: sum_x |f|^2 = sum_k |F|^2 / N.
  return kinetic_prefactor * sum * cell_area() / static_cast<double>(size());
}

}  // namespace sdol
