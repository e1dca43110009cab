#include "sdol/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sdol {

std::array<double, 3> populations(const SpinorField& state) {
  std::array<double, 3> pop{};
  for (int c = 0; c < 3; ++c) {
    double sum = 0;
    for (const auto& v : state.psi[c]) sum += std::norm(v);
    pop[c] = sum * state.cell_area();
  }
  return pop;
}

AngularMomentum angular_momentum(const SpinorField& state, const SpectralGrid& spectral) {
  const GridSpec& g = state.grid;
  const int n = g.points;
  const auto pop = populations(state);
  const double total = pop[0] + pop[1] + pop[2];

  ComplexGrid dx(g.size()), dy(g.size());
  AngularMomentum am;
  am.fz_mean = (pop[0] - pop[2]) / total;
  for (int c = 0; c < 3; ++c) {
    if (pop[c] <= 0) continue;
    const auto& f = state.psi[c];
    spectral.gradient(f, dx, dy);
    double sum = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(i) * n + j;
        // psi* (-i)(x dy - y dx) psi; the real part is the expectation density.
        const auto lpsi = std::complex<double>(0, -1) * (g.coordinate(i) * dy[k] - g.coordinate(j) * dx[k]);
        sum += (std::conj(f[k]) * lpsi).real();
      }
    am.lz[c] = sum * state.cell_area() / pop[c];
  }
  for (int c = 0; c < 3; ++c) {
    am.abs_lz_mean += pop[c] / total * std::abs(am.lz[c]);
    am.zeta_measured += pop[c] / total * am.lz[c];
  }
  am.zeta_measured += am.fz_mean;
  return am;
}

AngularMomentum angular_momentum(const SpinorField& state) {
  const SpectralGrid spectral(state.grid);
  return angular_momentum(state, spectral);
}

namespace {

std::complex<double> bilinear(std::span<const std::complex<double>> f, const GridSpec& g, double x, double y) {
  const int n = g.points;
  const double h = g.spacing();
  // Fractional index relative to the first sample at coordinate(0).
  const double fi = x / h + 0.5 * (n - 1);
  const double fj = y / h + 0.5 * (n - 1);
  const int i0 = static_cast<int>(std::floor(fi));
  const int j0 = static_cast<int>(std::floor(fj));
  if (i0 < 0 || j0 < 0 || i0 + 1 >= n || j0 + 1 >= n)
    throw UndefinedWindingError("winding_number: loop leaves the grid");
  const double tx = fi - i0, ty = fj - j0;
  auto at = [&](int i, int j) { return f[static_cast<std::size_t>(i) * n + j]; };
  return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0 + 1, j0) + (1 - tx) * ty * at(i0, j0 + 1) +
         tx * ty * at(i0 + 1, j0 + 1);
}

}  // namespace

int winding_number(std::span<const std::complex<double>> component, const GridSpec& grid,
                   const WindingOptions& options) {
  if (component.size() != grid.size()) throw std::invalid_argument("winding_number: grid size mismatch");
  if (options.samples < 8) throw std::invalid_argument("winding_number: need at least 8 loop samples");
  double peak = 0;
  for (const auto& v : component) peak = std::max(peak, std::abs(v));
  const double floor_amp = options.threshold * peak;

  std::vector<std::complex<double>> loop(options.samples);
  for (int s = 0; s < options.samples; ++s) {
    const double phi = 2.0 * std::numbers::pi * s / options.samples;
    loop[s] = bilinear(component, grid, options.loop_radius * std::cos(phi), options.loop_radius * std::sin(phi));
    if (!(std::abs(loop[s]) > floor_amp) || peak == 0) {
      std::ostringstream msg;
      msg << "winding_number: amplitude " << std::abs(loop[s]) << " at phi=" << phi << " is below " << floor_amp;
      throw UndefinedWindingError(msg.str());
    }
  }
  double total = 0;
  for (int s = 0; s < options.samples; ++s) {
    const auto next = loop[(s + 1) % options.samples];
    total += std::arg(next * std::conj(loop[s]));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

std::vector<TexturePoint> spin_texture(const SpinorField& state, const TextureRegion& region) {
  const GridSpec& g = state.grid;
  double peak = 0;
  for (std::size_t k = 0; k < state.size(); ++k) peak = std::max(peak, state.density(k));
  std::vector<TexturePoint> out;
  for (int i = 0; i < g.points; ++i) {
    const double x = g.coordinate(i);
    if (x < region.x_min || x > region.x_max) continue;
    for (int j = 0; j < g.points; ++j) {
      const double y = g.coordinate(j);
      if (y < region.y_min || y > region.y_max) continue;
      const auto k = static_cast<std::size_t>(i) * g.points + j;
      TexturePoint p{x, y, 0, 0, 0, state.density(k)};
      if (p.density > 1e-14 * peak) {
        const auto f = spin1::local_spin_expectation(state.at(k));
        p.fx = f[0] / p.density;
        p.fy = f[1] / p.density;
        p.fz = f[2] / p.density;
      }
      out.push_back(p);
    }
  }
  return out;
}

ObservableBundle measure(const SpinorField& state, const SpectralGrid& spectral, const ObservableOptions& options) {
  ObservableBundle b;
  b.populations = populations(state);
  b.n_total = b.populations[0] + b.populations[1] + b.populations[2];
  b.angular = angular_momentum(state, spectral);
  bool consistent = true;
  std::optional<int> zeta;
  for (int c = 0; c < 3; ++c) {
    try {
      b.windings[c] = winding_number(state.psi[c], state.grid, options.winding);
    } catch (const UndefinedWindingError&) {
      b.windings[c].reset();
    }
    if (b.populations[c] < options.populated_fraction * b.n_total) continue;
    if (!b.windings[c]) {
      consistent = false;
      continue;
    }
    const int value = *b.windings[c] + (1 - c);
    if (zeta && *zeta != value) consistent = false;
    zeta = value;
  }
  if (consistent) b.zeta_from_windings = zeta;
  b.texture = spin_texture(state, options.texture);
  return b;
}

}  // namespace sdol
