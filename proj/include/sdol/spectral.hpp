#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <fftw3.h>

#include "sdol/lattice_field.hpp"

namespace sdol {

/// std::allocator replacement backed by fftw_malloc, so every buffer has the
/// alignment FFTW planned for.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    if (auto* p = static_cast<T*>(fftw_malloc(n * sizeof(T)))) return p;
    throw std::bad_alloc();
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using ComplexGrid = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

/// 2D periodic box with FFT plans and the wavenumber tables for spectral
/// derivatives. Plans use FFTW_ESTIMATE so results are bit-reproducible.
/// Transforms share internal scratch buffers: one instance per thread.
class SpectralGrid {
 public:
  explicit SpectralGrid(const GridSpec& grid);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  const GridSpec& spec() const { return grid_; }
  int points() const { return grid_.points; }
  std::size_t size() const { return grid_.size(); }
  double cell_area() const { return grid_.spacing() * grid_.spacing(); }

  /// Unnormalised forward transform.
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// Backward transform including the 1/N normalisation.
  void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

  /// k^2 at flat Fourier index.
  double k_squared(std::size_t idx) const { return k2_[idx]; }
  /// Wavenumbers used for first derivatives; the Nyquist entry is zero.
  double kx(int i) const { return kd_[i]; }
  double ky(int j) const { return kd_[j]; }

  /// d/dx and d/dy of a real-space field.
  void gradient(std::span<const std::complex<double>> f, std::span<std::complex<double>> dfdx,
                std::span<std::complex<double>> dfdy) const;

  /// Applies -kinetic_prefactor * Laplacian.
  void apply_kinetic(std::span<const std::complex<double>> f, std::span<std::complex<double>> out) const;

  /// Kinetic energy integral kinetic_prefactor * int |grad f|^2 dA.
  double kinetic_energy(std::span<const std::complex<double>> f) const;

 private:
  GridSpec grid_;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan backward_plan_ = nullptr;
  std::vector<double> k2_;
  std::vector<double> kd_;
  mutable ComplexGrid scratch_;
  mutable ComplexGrid scratch2_;
};

}  // namespace sdol
