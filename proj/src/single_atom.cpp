#include "sdol/single_atom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <lapacke.h>

#include "sdol/lobpcg.hpp"
#include "sdol/spectral.hpp"
#include "sdol/spin1.hpp"

namespace sdol {

void RadialGrid::validate() const {
  if (n_points < 200) throw std::invalid_argument("RadialGrid: need at least 200 points");
  if (r_max < 0.3) throw std::invalid_argument("RadialGrid: r_max must be at least 0.3 lambda_l");
}

RadialPotentials RadialPotentials::isotropic(const RadialGrid& grid, const LightShift& shift) {
  RadialPotentials p;
  p.V.resize(grid.n_points);
  p.B.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const auto prof = isotropic_profiles(grid.radius(i), shift);
    p.V[i] = prof.V;
    p.B[i] = prof.B;
  }
  return p;
}

RadialPotentials RadialPotentials::harmonic(const RadialGrid& grid, double curvature) {
  RadialPotentials p;
  p.V.resize(grid.n_points);
  p.B.assign(grid.n_points, 0.0);
  for (int i = 0; i < grid.n_points; ++i) p.V[i] = curvature * grid.radius(i) * grid.radius(i);
  return p;
}

BandedMatrix::BandedMatrix(int dim) : dim_(dim), full_(static_cast<std::size_t>(2 * half_bandwidth + 1) * dim, 0.0) {}

double& BandedMatrix::at(int row, int col) {
  if (std::abs(row - col) > half_bandwidth || row < 0 || col < 0 || row >= dim_ || col >= dim_)
    throw std::out_of_range("BandedMatrix: entry outside the band");
  return full_[static_cast<std::size_t>(row - col + half_bandwidth) +
               static_cast<std::size_t>(2 * half_bandwidth + 1) * col];
}

double BandedMatrix::operator()(int row, int col) const {
  if (std::abs(row - col) > half_bandwidth) return 0.0;
  return full_[static_cast<std::size_t>(row - col + half_bandwidth) +
               static_cast<std::size_t>(2 * half_bandwidth + 1) * col];
}

double BandedMatrix::max_asymmetry() const {
  double worst = 0;
  for (int c = 0; c < dim_; ++c)
    for (int r = std::max(0, c - half_bandwidth); r < c; ++r)
      worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
  return worst;
}

std::vector<double> BandedMatrix::upper_band_storage() const {
  const int ld = half_bandwidth + 1;
  std::vector<double> ab(static_cast<std::size_t>(ld) * dim_, 0.0);
  for (int c = 0; c < dim_; ++c)
    for (int r = std::max(0, c - half_bandwidth); r <= c; ++r)
      ab[static_cast<std::size_t>(half_bandwidth + r - c) + static_cast<std::size_t>(ld) * c] = (*this)(r, c);
  return ab;
}

Eigen::MatrixXd BandedMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int c = 0; c < dim_; ++c)
    for (int r = std::max(0, c - half_bandwidth); r <= std::min(dim_ - 1, c + half_bandwidth); ++r)
      m(r, c) = (*this)(r, c);
  return m;
}

Eigen::Matrix3d centrifugal_matrix(int zeta) {
  const Eigen::Matrix3d lz = zeta * Eigen::Matrix3d::Identity() - spin1::fz_in_chi_basis();
  return lz * lz;
}

BandedMatrix build_radial_hamiltonian(const ZetaSector& sector, const RadialGrid& grid,
                                      const RadialPotentials& potentials, double zeeman_per_mG) {
  grid.validate();
  const int n = grid.n_points;
  if (static_cast<int>(potentials.V.size()) != n || static_cast<int>(potentials.B.size()) != n)
    throw std::invalid_argument("build_radial_hamiltonian: potentials not sampled on the grid");

  const double h = grid.spacing();
  const double k = kinetic_prefactor;
  const Eigen::Matrix3d cent = centrifugal_matrix(sector.zeta);
  const Eigen::Matrix3d zeeman = -zeeman_per_mG * sector.b_ext_mG * spin1::fz_in_chi_basis();
  constexpr double spin_projection[3] = {1.0, 0.0, -1.0};  // F_r eigenvalue of each chi channel

  BandedMatrix hm(3 * n);
  for (int i = 0; i < n; ++i) {
    const double r = grid.radius(i);
    const double r_in = r - 0.5 * h;   // zero at the first cell: regularity at the origin
    const double r_out = r + 0.5 * h;
    // Dirichlet at r_max = r_{n-1} + h/2 through the ghost value g_n = -g_{n-1}.
    const double outer_weight = (i == n - 1) ? 2.0 * r_out : r_out;
    const double diag_kinetic = k * (r_in + outer_weight) / (h * h * r);
    for (int c = 0; c < 3; ++c) {
      const int row = 3 * i + c;
      for (int d = 0; d < 3; ++d) {
        double v = k * cent(c, d) / (r * r) + zeeman(c, d);
        if (c == d) v += diag_kinetic + potentials.V[i] - spin_projection[c] * potentials.B[i];
        if (v != 0.0 || c == d) hm.at(row, 3 * i + d) = v;
      }
      if (i + 1 < n) {
        const double off = -k * r_out / (h * h * std::sqrt(r * grid.radius(i + 1)));
        hm.at(row, row + 3) = off;
        hm.at(row + 3, row) = off;
      }
    }
  }
  return hm;
}

int SpectrumResult::principal(int k) const { return std::abs(sector.zeta) + 2 * k; }

std::array<double, 3> SpectrumResult::mf_populations(int level) const {
  const Eigen::Matrix3d o = spin1::chi_basis(0.0).real();  // rows chi_k in the m_F basis
  std::array<double, 3> pop{};
  const double h = grid.spacing();
  for (int i = 0; i < grid.n_points; ++i) {
    const Eigen::Vector3d g(channel(level, i, 0), channel(level, i, 1), channel(level, i, 2));
    const Eigen::Vector3d m = o.transpose() * g;
    for (int c = 0; c < 3; ++c) pop[c] += m[c] * m[c] * h;
  }
  return pop;
}

SpectrumResult solve_sector(const ZetaSector& sector, const RadialGrid& grid, const RadialPotentials& potentials,
                            double zeeman_per_mG, int n_levels) {
  const BandedMatrix hm = build_radial_hamiltonian(sector, grid, potentials, zeeman_per_mG);
  const int dim = hm.dim();
  if (n_levels < 1 || n_levels > dim) throw std::invalid_argument("solve_sector: invalid level count");
  const int kd = BandedMatrix::half_bandwidth;
  auto ab = hm.upper_band_storage();

  // Eigenvalues only: asking dsbevx for vectors makes it form the dense
  // orthogonal matrix of the band reduction, which is cubic in the grid size.
  std::vector<double> w(dim);
  std::vector<double> unused(1);
  std::vector<lapack_int> ifail(dim);
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', dim, kd, ab.data(), kd + 1, unused.data(), 1,
                                         0.0, 0.0, 1, n_levels, abstol, &found, w.data(), unused.data(), 1,
                                         ifail.data());
  if (info != 0 || found != n_levels) {
    std::ostringstream msg;
    msg << "solve_sector: dsbevx failed (info=" << info << ", found " << found << " of " << n_levels
        << " levels, zeta=" << sector.zeta << ", B=" << sector.b_ext_mG << " mG)";
    throw EigensolverError(msg.str());
  }

  // Vectors by inverse iteration on the banded LU of H - sigma, sigma just
  // below each eigenvalue.
  Eigen::MatrixXd z(dim, n_levels);
  const int ldab = 3 * kd + 1;
  std::vector<double> lu(static_cast<std::size_t>(ldab) * dim);
  std::vector<lapack_int> pivots(dim);
  for (int level = 0; level < n_levels; ++level) {
    const double sigma = w[level] - 1e-10 * std::max(1.0, std::abs(w[level]));
    std::fill(lu.begin(), lu.end(), 0.0);
    for (int c = 0; c < dim; ++c)
      for (int r = std::max(0, c - kd); r <= std::min(dim - 1, c + kd); ++r)
        lu[static_cast<std::size_t>(2 * kd + r - c) + static_cast<std::size_t>(ldab) * c] =
            hm(r, c) - (r == c ? sigma : 0.0);
    if (LAPACKE_dgbtrf(LAPACK_COL_MAJOR, dim, dim, kd, kd, lu.data(), ldab, pivots.data()) < 0)
      throw EigensolverError("solve_sector: banded LU failed");
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(dim, 1.0, 2.0);
    for (int sweep = 0; sweep < 3; ++sweep) {
      const lapack_int solve = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', dim, kd, kd, 1, lu.data(), ldab,
                                              pivots.data(), v.data(), dim);
      if (solve != 0) throw EigensolverError("solve_sector: banded solve failed");
      // Near-degenerate partners from earlier levels are projected out.
      for (int prev = 0; prev < level; ++prev)
        if (std::abs(w[prev] - w[level]) < 1e-6 * std::max(1.0, std::abs(w[level]))) v -= z.col(prev).dot(v) * z.col(prev);
      v.normalize();
    }
    z.col(level) = v;
  }

  SpectrumResult res;
  res.sector = sector;
  res.grid = grid;
  res.eigenvalues.assign(w.begin(), w.begin() + n_levels);
  res.eigenvectors = z / std::sqrt(grid.spacing());
  // Fix the sign so reruns give identical vectors: largest component positive.
  for (int k = 0; k < n_levels; ++k) {
    Eigen::Index arg;
    res.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (res.eigenvectors(arg, k) < 0) res.eigenvectors.col(k) *= -1.0;
  }
  return res;
}

std::vector<LabelledLevel> level_diagram(double b_ext_mG, const std::vector<int>& zetas, const RadialGrid& grid,
                                         const RadialPotentials& potentials, double zeeman_per_mG,
                                         int levels_per_sector) {
  std::vector<LabelledLevel> out;
  for (int zeta : zetas) {
    const auto s = solve_sector({zeta, b_ext_mG}, grid, potentials, zeeman_per_mG, levels_per_sector);
    for (int k = 0; k < levels_per_sector; ++k) out.push_back({zeta, s.principal(k), s.eigenvalues[k]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LabelledLevel& a, const LabelledLevel& b) { return a.energy < b.energy; });
  return out;
}

CrossingSearch ground_crossing_field(int other_zeta, double b_lo, double b_hi, const RadialGrid& grid,
                                     const RadialPotentials& potentials, double zeeman_per_mG, double tolerance_mG) {
  auto gap = [&](double b) {
    return solve_sector({0, b}, grid, potentials, zeeman_per_mG, 1).eigenvalues[0] -
           solve_sector({other_zeta, b}, grid, potentials, zeeman_per_mG, 1).eigenvalues[0];
  };
  double g_lo = gap(b_lo);
  const double g_hi = gap(b_hi);
  if (std::signbit(g_lo) == std::signbit(g_hi)) return {};
  while (b_hi - b_lo > tolerance_mG) {
    const double mid = 0.5 * (b_lo + b_hi);
    const double g_mid = gap(mid);
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      b_lo = mid;
      g_lo = g_mid;
    } else {
      b_hi = mid;
    }
  }
  return {true, 0.5 * (b_lo + b_hi)};
}

namespace {

// Matrix-free Hamiltonian on the spectral grid: each column stacks the three
// components (m_F = +1, 0, -1) of one state.
class CartesianHamiltonian {
 public:
  CartesianHamiltonian(const FieldMaps& maps, double zeeman_energy)
      : maps_(maps), spectral_(maps.grid), zeeman_(zeeman_energy), in_(maps.grid.size()), out_(maps.grid.size()) {}

  std::size_t points() const { return maps_.grid.size(); }

  void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& hx) {
    const auto np = static_cast<Eigen::Index>(points());
    hx.resize(x.rows(), x.cols());
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
      for (int c = 0; c < 3; ++c) {
        std::copy_n(x.col(col).data() + c * np, np, in_.begin());
        spectral_.apply_kinetic(in_, out_);
        std::copy_n(out_.begin(), np, hx.col(col).data() + c * np);
      }
      for (Eigen::Index p = 0; p < np; ++p) {
        const auto k = static_cast<std::size_t>(p);
        const spin1::Spinor psi{x(p, col), x(p + np, col), x(p + 2 * np, col)};
        // Local part: V - B.F - b F_z.
        const auto fx = spin1::apply_spin_matrix(spin1::Axis::x, psi);
        const auto fy = spin1::apply_spin_matrix(spin1::Axis::y, psi);
        for (int c = 0; c < 3; ++c) {
          const double mf = 1.0 - c;
          hx(p + c * np, col) += maps_.V[k] * psi[c] - maps_.Bx[k] * fx[c] - maps_.By[k] * fy[c] -
                                 zeeman_ * mf * psi[c];
        }
      }
    }
  }

  void precondition(const Eigen::MatrixXcd& r, Eigen::MatrixXcd& w, double shift) {
    const auto np = static_cast<Eigen::Index>(points());
    w.resize(r.rows(), r.cols());
    for (Eigen::Index col = 0; col < r.cols(); ++col)
      for (int c = 0; c < 3; ++c) {
        std::copy_n(r.col(col).data() + c * np, np, in_.begin());
        spectral_.forward(in_, out_);
        for (std::size_t k = 0; k < points(); ++k) out_[k] /= kinetic_prefactor * spectral_.k_squared(k) + shift;
        spectral_.backward(out_, in_);
        std::copy_n(in_.begin(), np, w.col(col).data() + c * np);
      }
  }

 private:
  const FieldMaps& maps_;
  SpectralGrid spectral_;
  double zeeman_;
  ComplexGrid in_;
  ComplexGrid out_;
};

}  // namespace

CartesianSpectrum cartesian_oracle(double b_ext_mG, const FieldMaps& maps, double zeeman_per_mG, int n_levels,
                                   const CartesianOracleOptions& options) {
  if (options.block < n_levels) throw std::invalid_argument("cartesian_oracle: block smaller than level count");
  CartesianHamiltonian ham(maps, zeeman_per_mG * b_ext_mG);
  const auto np = static_cast<Eigen::Index>(ham.points());
  const GridSpec& g = maps.grid;

  // Start from oscillator-like functions x^a y^b exp(-r^2 / 2 l^2) spread over
  // the three components; deterministic and linearly independent.
  const double ell = maps.shift.scalar > 0 ? maps.shift.harmonic_length() : 0.1 * g.side;
  Eigen::MatrixXcd x0 = Eigen::MatrixXcd::Zero(3 * np, options.block);
  for (int col = 0; col < options.block; ++col) {
    const int comp = col % 3;
    const int order = col / 3;
    for (int i = 0; i < g.points; ++i)
      for (int j = 0; j < g.points; ++j) {
        const double x = g.coordinate(i) / ell, y = g.coordinate(j) / ell;
        const std::complex<double> z(x, y);
        const auto k = static_cast<Eigen::Index>(maps.index(i, j));
        x0(k + comp * np, col) = std::pow(z, order) * std::exp(-0.5 * (x * x + y * y)) + 1e-3 * std::cos(3.0 * x + col);
      }
  }

  // The shift only has to keep the preconditioner positive definite; one
  // oscillator quantum damps the low modes about right.
  const double shift = std::max(1.0, maps.shift.harmonic_quantum());
  BlockOperator h_op = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { ham.apply(in, out); };
  BlockOperator t_op = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { ham.precondition(in, out, shift); };
  const auto res = lobpcg(h_op, t_op, std::move(x0), n_levels, {options.max_iterations, options.tolerance});
  return {res.eigenvalues, res.iterations, res.converged};
}

std::vector<IntensityGap> crossing_intensity_scan(double b_ext_mG, const std::vector<double>& intensities_W_cm2,
                                                  const ShiftAtIntensity& shift_at, const RadialGrid& grid,
                                                  double zeeman_per_mG) {
  std::vector<IntensityGap> out;
  out.reserve(intensities_W_cm2.size());
  for (double intensity : intensities_W_cm2) {
    const auto pots = RadialPotentials::isotropic(grid, shift_at(intensity));
    const double e0 = solve_sector({0, b_ext_mG}, grid, pots, zeeman_per_mG, 1).eigenvalues[0];
    const double e1 = solve_sector({1, b_ext_mG}, grid, pots, zeeman_per_mG, 1).eigenvalues[0];
    out.push_back({intensity, e0 - e1});
  }
  return out;
}

double crossing_intensity(const std::vector<IntensityGap>& scan) {
  for (std::size_t k = 1; k < scan.size(); ++k) {
    const auto& a = scan[k - 1];
    const auto& b = scan[k];
    if (std::signbit(a.gap) != std::signbit(b.gap)) {
      const double t = a.gap / (a.gap - b.gap);
      return a.intensity_W_cm2 + t * (b.intensity_W_cm2 - a.intensity_W_cm2);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace sdol
