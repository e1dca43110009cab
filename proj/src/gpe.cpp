#include "sdol/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace sdol {

GpeSolver::GpeSolver(const FieldMaps& fields, const CouplingConstants& couplings, double zeeman_per_mG)
    : fields_(fields),
      couplings_(couplings),
      zeeman_per_mG_(zeeman_per_mG),
      spectral_(fields.grid),
      work_(fields.grid.size()) {
  if (fields.V.size() != fields.grid.size() || fields.Bx.size() != fields.grid.size() ||
      fields.By.size() != fields.grid.size())
    throw std::invalid_argument("GpeSolver: field maps do not match their grid");
}

namespace {

void check_grid(const SpinorField& state, const FieldMaps& fields) {
  if (state.grid.points != fields.grid.points || state.grid.side != fields.grid.side)
    throw std::invalid_argument("GpeSolver: state and field maps live on different grids");
}

void check_finite(double value, const char* term) {
  if (!std::isfinite(value)) throw DivergenceError(std::string("energy term '") + term + "' is not finite");
}

}  // namespace

EnergyDecomposition GpeSolver::energy(const SpinorField& state, double b_ext_mG) {
  check_grid(state, fields_);
  const double b = zeeman_per_mG_ * b_ext_mG;
  EnergyDecomposition e;
  for (const auto& comp : state.psi) e.kinetic += spectral_.kinetic_energy(comp);

  double ev = 0, ef = 0, ez = 0, e0 = 0, e2 = 0;
  for (std::size_t k = 0; k < state.size(); ++k) {
    const double n = state.density(k);
    const auto f = spin1::local_spin_expectation(state.at(k));
    ev += fields_.V[k] * n;
    ef -= fields_.Bx[k] * f[0] + fields_.By[k] * f[1];
    ez -= b * f[2];
    e0 += n * n;
    e2 += f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
  }
  const double da = state.cell_area();
  e.scalar_potential = ev * da;
  e.fictitious = ef * da;
  e.zeeman = ez * da;
  e.interaction_c0 = 0.5 * couplings_.c0_2d * e0 * da;
  e.interaction_c2 = 0.5 * couplings_.c2_2d * e2 * da;

  check_finite(e.kinetic, "kinetic");
  check_finite(e.scalar_potential, "scalar_potential");
  check_finite(e.fictitious, "fictitious");
  check_finite(e.zeeman, "zeeman");
  check_finite(e.interaction_c0, "interaction_c0");
  check_finite(e.interaction_c2, "interaction_c2");

  // <Psi|H_mf|Psi> counts each interaction term twice.
  SpinorField h(state.grid, state.n_atoms);
  apply_hamiltonian(state, b_ext_mG, h);
  double expectation = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < state.size(); ++k) expectation += (std::conj(state.psi[c][k]) * h.psi[c][k]).real();
  e.total = expectation * da - e.interaction_c0 - e.interaction_c2;
  check_finite(e.total, "total");
  return e;
}

void GpeSolver::apply_hamiltonian(const SpinorField& state, double b_ext_mG, SpinorField& out) {
  check_grid(state, fields_);
  if (out.grid.points != state.grid.points) out = SpinorField(state.grid, state.n_atoms);
  for (int c = 0; c < 3; ++c) spectral_.apply_kinetic(state.psi[c], out.psi[c]);
  const double b = zeeman_per_mG_ * b_ext_mG;
  const double c0 = couplings_.c0_2d, c2 = couplings_.c2_2d;
  for (std::size_t k = 0; k < state.size(); ++k) {
    const auto psi = state.at(k);
    const double n = state.density(k);
    const auto f = spin1::local_spin_expectation(psi);
    const double hx = -fields_.Bx[k] + c2 * f[0];
    const double hy = -fields_.By[k] + c2 * f[1];
    const double hz = -b + c2 * f[2];
    const double s = fields_.V[k] + c0 * n;
    const auto fx = spin1::apply_spin_matrix(spin1::Axis::x, psi);
    const auto fy = spin1::apply_spin_matrix(spin1::Axis::y, psi);
    const auto fz = spin1::apply_spin_matrix(spin1::Axis::z, psi);
    for (int c = 0; c < 3; ++c) out.psi[c][k] += s * psi[c] + hx * fx[c] + hy * fy[c] + hz * fz[c];
  }
}

double GpeSolver::residual(const SpinorField& state, double b_ext_mG, double* mu_out) {
  SpinorField h(state.grid, state.n_atoms);
  apply_hamiltonian(state, b_ext_mG, h);
  double num = 0, overlap = 0, norm = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < state.size(); ++k) {
      overlap += (std::conj(state.psi[c][k]) * h.psi[c][k]).real();
      norm += std::norm(state.psi[c][k]);
    }
  const double mu = overlap / norm;
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < state.size(); ++k) num += std::norm(h.psi[c][k] - mu * state.psi[c][k]);
  if (mu_out) *mu_out = mu;
  return std::sqrt(num / norm) / std::abs(mu);
}

namespace {

// Real-arithmetic view of one spinor at grid point k.
struct Point {
  double r[3], i[3];
};

inline Point load(const SpinorField& s, std::size_t k) {
  return {{s.psi[0][k].real(), s.psi[1][k].real(), s.psi[2][k].real()},
          {s.psi[0][k].imag(), s.psi[1][k].imag(), s.psi[2][k].imag()}};
}

inline void store(SpinorField& s, std::size_t k, const Point& p) {
  for (int c = 0; c < 3; ++c) s.psi[c][k] = {p.r[c], p.i[c]};
}

// (h.F) psi for a real vector h, F the spin-1 matrices in the m_F basis.
inline Point apply_hf(double hx, double hy, double hz, const Point& p) {
  constexpr double a = 0.70710678118654752440;
  // h_- = hx - i hy acting on the next component up, h_+ on the next one down.
  const double m1r = hx * p.r[1] + hy * p.i[1], m1i = hx * p.i[1] - hy * p.r[1];  // h_- psi_0
  const double m2r = hx * p.r[2] + hy * p.i[2], m2i = hx * p.i[2] - hy * p.r[2];  // h_- psi_-1
  const double p0r = hx * p.r[0] - hy * p.i[0], p0i = hx * p.i[0] + hy * p.r[0];  // h_+ psi_+1
  const double p1r = hx * p.r[1] - hy * p.i[1], p1i = hx * p.i[1] + hy * p.r[1];  // h_+ psi_0
  return {{hz * p.r[0] + a * m1r, a * (p0r + m2r), a * p1r - hz * p.r[2]},
          {hz * p.i[0] + a * m1i, a * (p0i + m2i), a * p1i - hz * p.i[2]}};
}

inline void densities(const Point& p, double& n, double& fx, double& fy, double& fz) {
  constexpr double s2 = 1.41421356237309504880;
  const double n0 = p.r[0] * p.r[0] + p.i[0] * p.i[0];
  const double n1 = p.r[1] * p.r[1] + p.i[1] * p.i[1];
  const double n2 = p.r[2] * p.r[2] + p.i[2] * p.i[2];
  n = n0 + n1 + n2;
  // F_+ = sqrt2 (psi_1^* psi_0 + psi_0^* psi_-1)
  fx = s2 * (p.r[0] * p.r[1] + p.i[0] * p.i[1] + p.r[1] * p.r[2] + p.i[1] * p.i[2]);
  fy = s2 * (p.r[0] * p.i[1] - p.i[0] * p.r[1] + p.r[1] * p.i[2] - p.i[1] * p.r[2]);
  fz = n0 - n2;
}

}  // namespace

double GpeSolver::local_step(SpinorField& state, double b_ext_mG, double tau) {
  const double b = zeeman_per_mG_ * b_ext_mG;
  const double c0 = couplings_.c0_2d, c2 = couplings_.c2_2d;
  const std::size_t size = state.size();
  const double* V = fields_.V.data();
  const double* Bx = fields_.Bx.data();
  const double* By = fields_.By.data();

  // The nonlinear terms see the density at the middle of the step, predicted
  // by an Euler half step and rescaled to N. Freezing it at the start of the
  // step, or letting it carry the norm drift of imaginary time, leaves an
  // O(dtau) error in the converged state.
  const bool nonlinear = c0 != 0.0 || c2 != 0.0;
  double mid_scale = 0;
  if (nonlinear) {
    for (auto& m : mid_) m.resize(size);
    const double scale = state.n_atoms / state.norm();
    double mid_norm = 0;
    for (std::size_t k = 0; k < size; ++k) {
      const Point p = load(state, k);
      double n, fx, fy, fz;
      densities(p, n, fx, fy, fz);
      const double s = V[k] + c0 * scale * n;
      const Point hp = apply_hf(-Bx[k] + c2 * scale * fx, -By[k] + c2 * scale * fy, -b + c2 * scale * fz, p);
      Point q;
      for (int c = 0; c < 3; ++c) {
        q.r[c] = p.r[c] - 0.5 * tau * (s * p.r[c] + hp.r[c]);
        q.i[c] = p.i[c] - 0.5 * tau * (s * p.i[c] + hp.i[c]);
      }
      densities(q, mid_[0][k], mid_[1][k], mid_[2][k], mid_[3][k]);
      mid_norm += mid_[0][k];
    }
    mid_scale = state.n_atoms / (mid_norm * state.cell_area());
  }

  double out_norm = 0;
  for (std::size_t k = 0; k < size; ++k) {
    const Point p = load(state, k);
    double n = 0, fx = 0, fy = 0, fz = 0;
    if (nonlinear) {
      n = mid_scale * mid_[0][k];
      fx = mid_scale * mid_[1][k];
      fy = mid_scale * mid_[2][k];
      fz = mid_scale * mid_[3][k];
    }
    const double hx = -Bx[k] + c2 * fx, hy = -By[k] + c2 * fy, hz = -b + c2 * fz;
    const double factor = std::exp(-tau * (V[k] + c0 * n));
    const double eta = std::sqrt(hx * hx + hy * hy + hz * hz);
    Point out = p;
    if (eta > 0) {
      // exp(-tau h.F) = 1 + sinh(a) n.F + (cosh(a) - 1) (n.F)^2, a = -tau eta,
      // both coefficients from one expm1 so small steps keep full precision.
      const double em = std::expm1(-tau * eta);
      const double ratio = em / (1.0 + em);
      const double s = 0.5 * (em + ratio) / eta;
      const double c = 0.5 * (em - ratio) / (eta * eta);
      const Point f1 = apply_hf(hx, hy, hz, p);
      const Point f2 = apply_hf(hx, hy, hz, f1);
      for (int j = 0; j < 3; ++j) {
        out.r[j] = p.r[j] + s * f1.r[j] + c * f2.r[j];
        out.i[j] = p.i[j] + s * f1.i[j] + c * f2.i[j];
      }
    }
    for (int j = 0; j < 3; ++j) {
      out.r[j] *= factor;
      out.i[j] *= factor;
      out_norm += out.r[j] * out.r[j] + out.i[j] * out.i[j];
    }
    store(state, k, out);
  }
  return out_norm * state.cell_area();
}

void GpeSolver::kinetic_step(SpinorField& state, double dtau) {
  if (dtau != kinetic_factor_dtau_) {
    kinetic_factor_.resize(state.size());
    for (std::size_t k = 0; k < state.size(); ++k)
      kinetic_factor_[k] = std::exp(-dtau * kinetic_prefactor * spectral_.k_squared(k));
    kinetic_factor_dtau_ = dtau;
  }
  for (auto& comp : state.psi) {
    spectral_.forward(comp, work_);
    for (std::size_t k = 0; k < state.size(); ++k) work_[k] *= kinetic_factor_[k];
    spectral_.backward(work_, comp);
  }
}

void GpeSolver::step(SpinorField& state, double b_ext_mG, double dtau) {
  check_grid(state, fields_);
  if (!(dtau > 0)) throw std::invalid_argument("GpeSolver::step: dtau must be positive");
  local_step(state, b_ext_mG, 0.5 * dtau);
  kinetic_step(state, dtau);
  local_step(state, b_ext_mG, 0.5 * dtau);
  state.normalize();
}

void GpeSolver::rescale(SpinorField& state, double norm) {
  if (!(norm > 0) || !std::isfinite(norm))
    throw DivergenceError("state norm became " + std::to_string(norm) + " during evolution");
  const double scale = std::sqrt(state.n_atoms / norm);
  for (auto& comp : state.psi)
    for (auto& v : comp) v *= scale;
}

EvolutionResult GpeSolver::evolve(SpinorField& state, double b_ext_mG, const SolverParams& params) {
  if (params.check_interval < 1) throw std::invalid_argument("evolve: check_interval must be positive");
  EvolutionResult res;
  res.dtau = params.dtau;
  state.normalize();
  double e_prev = energy(state, b_ext_mG).total;
  res.zeta_initial = angular_momentum(state, spectral_).zeta_measured;
  if (params.record_history) res.energy_history.push_back(e_prev);

  auto track_zeta = [&] {
    const double z = angular_momentum(state, spectral_).zeta_measured;
    res.zeta_max_drift = std::max(res.zeta_max_drift, std::abs(z - res.zeta_initial));
  };
  auto check_rise = [&](double before, double after, long it) {
    const double rise = (after - before) / std::abs(after);
    if (it > 10) res.max_energy_rise = std::max(res.max_energy_rise, rise);
    if (it > 10 && rise > params.monotonic_tol) {
      std::ostringstream msg;
      msg << "energy rose by " << rise << " (relative) at step " << it << " with dtau=" << res.dtau
          << "; try a smaller dtau";
      throw StepSizeError(msg.str());
    }
  };

  // Consecutive Strang steps are run with their adjacent half local steps
  // merged into one. The local propagator only sees Psi/||Psi||, so
  // renormalising in between does not break the merge. The state is brought
  // back to a step boundary whenever it is inspected.
  double e_check = e_prev;
  double last_residual = std::numeric_limits<double>::infinity();
  local_step(state, b_ext_mG, 0.5 * res.dtau);
  for (long it = 1; it <= params.max_iters; ++it) {
    kinetic_step(state, res.dtau);
    res.iterations = it;
    const bool inspect = params.record_history || it % params.check_interval == 0 || it == params.max_iters;
    rescale(state, local_step(state, b_ext_mG, inspect ? 0.5 * res.dtau : res.dtau));
    if (!inspect) continue;
    res.norm_max_error = std::max(res.norm_max_error, std::abs(state.norm() - state.n_atoms) / state.n_atoms);

    bool stop = false;
    if (params.record_history) {
      const double e = energy(state, b_ext_mG).total;
      check_rise(res.energy_history.back(), e, it);
      res.energy_history.push_back(e);
      track_zeta();
    }
    if (it % params.check_interval == 0) {
      const double e_now = energy(state, b_ext_mG).total;
      check_rise(e_check, e_now, it);
      track_zeta();
      const bool settled = std::abs(e_now - e_check) < params.energy_tol * std::abs(e_now);
      e_check = e_now;
      if (settled) {
        const double r = residual(state, b_ext_mG);
        if (r <= params.residual_tol) {
          res.converged = true;
          stop = true;
        } else if (r > 0.9 * last_residual) {
          // A residual that no longer improves at a settled energy is the
          // splitting error of the current step; a shrinking one just needs
          // more iterations.
          if (0.5 * res.dtau < params.min_dtau) {
            std::ostringstream msg;
            msg << "residual " << r << " stalled at the minimum dtau " << res.dtau;
            res.message = msg.str();
            stop = true;
          } else {
            res.dtau *= 0.5;
            last_residual = std::numeric_limits<double>::infinity();
          }
        } else {
          last_residual = r;
        }
      }
    }
    if (stop || it == params.max_iters) break;
    local_step(state, b_ext_mG, 0.5 * res.dtau);
  }
  if (!res.converged && res.message.empty()) res.message = "iteration limit reached";
  res.energy = energy(state, b_ext_mG);
  res.residual = residual(state, b_ext_mG, &res.mu);
  track_zeta();
  return res;
}

EnergyDecomposition energy_functional(const SpinorField& state, const FieldMaps& fields, double b_ext_mG,
                                      const CouplingConstants& couplings, double zeeman_per_mG) {
  GpeSolver solver(fields, couplings, zeeman_per_mG);
  return solver.energy(state, b_ext_mG);
}

void imaginary_time_step(SpinorField& state, const FieldMaps& fields, double b_ext_mG,
                         const CouplingConstants& couplings, double zeeman_per_mG, double dtau, double tolerance) {
  GpeSolver solver(fields, couplings, zeeman_per_mG);
  const double before = solver.energy(state, b_ext_mG).total;
  solver.step(state, b_ext_mG, dtau);
  const double after = solver.energy(state, b_ext_mG).total;
  if (after - before > tolerance * std::abs(after)) {
    std::ostringstream msg;
    msg << "energy rose from " << before << " to " << after << " with dtau=" << dtau << "; try a smaller dtau";
    throw StepSizeError(msg.str());
  }
}

SpinorField sector_ansatz(int zeta, const GridSpec& grid, double n_atoms, double sigma) {
  if (std::abs(zeta) > 3) throw std::invalid_argument("sector_ansatz: |zeta| must be at most 3");
  if (!(sigma > 0)) throw std::invalid_argument("sector_ansatz: sigma must be positive");
  SpinorField s(grid, n_atoms);
  for (int c = 0; c < 3; ++c) {
    const int m = zeta - (1 - c);
    for (int i = 0; i < grid.points; ++i)
      for (int j = 0; j < grid.points; ++j) {
        const std::complex<double> z(grid.coordinate(i) / sigma, grid.coordinate(j) / sigma);
        const auto w = m >= 0 ? z : std::conj(z);
        s.psi[c][static_cast<std::size_t>(i) * grid.points + j] =
            std::pow(w, std::abs(m)) * std::exp(-0.5 * std::norm(z));
      }
  }
  s.normalize();
  return s;
}

void add_noise(SpinorField& state, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double peak = 0;
  for (std::size_t k = 0; k < state.size(); ++k) peak = std::max(peak, state.density(k));
  // Envelope follows the total density so the noise stays inside the site.
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < state.size(); ++k) {
      const double env = std::sqrt(state.density(k));
      const std::complex<double> xi(gauss(rng), gauss(rng));
      state.psi[c][k] += amplitude * env * xi;
    }
  state.normalize();
}

namespace {

struct SectorRun {
  bool converged = false;
  EvolutionResult evolution;
  SpinorField state;
  std::string message;
};

SectorRun run_candidate(GpeSolver& solver, SpinorField start, double b_ext_mG, const SolverParams& params) {
  SectorRun run;
  try {
    run.evolution = solver.evolve(start, b_ext_mG, params);
    run.converged = run.evolution.converged;
    run.message = run.evolution.message;
  } catch (const std::exception& e) {
    run.message = e.what();
  }
  run.state = std::move(start);
  return run;
}

double ansatz_width(const FieldMaps& fields, const SolverParams& params) {
  if (params.sigma > 0) return params.sigma;
  if (fields.shift.scalar > 0) return fields.shift.harmonic_length();
  return 0.1 * fields.grid.side;
}

}  // namespace

GroundStateReport find_ground_state(double b_ext_mG, double n_atoms, GpeSolver& solver, const SolverParams& params) {
  const FieldMaps& fields = solver.fields();
  const double sigma = ansatz_width(fields, params);

  std::vector<SectorRun> runs;
  GroundStateReport report;
  report.b_ext_mG = b_ext_mG;
  auto record = [&](const std::string& name, SectorRun run) {
    CandidateSummary c{name, run.converged, run.evolution.energy.total, run.evolution.iterations, 0.0, run.message};
    if (!run.state.psi[0].empty()) c.zeta_measured = angular_momentum(run.state, solver.spectral()).zeta_measured;
    report.candidates.push_back(c);
    runs.push_back(std::move(run));
  };

  for (int zeta : params.restart_sectors)
    record("zeta=" + std::to_string(zeta),
           run_candidate(solver, sector_ansatz(zeta, fields.grid, n_atoms, sigma), b_ext_mG, params));

  auto best_index = [&]() -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < runs.size(); ++k)
      if (runs[k].converged && (!best || runs[k].evolution.energy.total < runs[*best].evolution.energy.total))
        best = k;
    return best;
  };

  // Perturbing the best axially symmetric state probes whether a
  // symmetry-broken state lies lower; a stable minimum simply relaxes back.
  if (params.noise_amplitude > 0) {
    SpinorField start = sector_ansatz(params.restart_sectors.empty() ? 0 : params.restart_sectors.front(),
                                      fields.grid, n_atoms, sigma);
    if (const auto b = best_index()) start = runs[*b].state;
    add_noise(start, params.noise_amplitude, params.seed);
    record("noise", run_candidate(solver, std::move(start), b_ext_mG, params));
  }

  const auto best = best_index();
  if (!best) {
    std::ostringstream msg;
    msg << "no candidate converged at B_ext=" << b_ext_mG << " mG:";
    for (const auto& c : report.candidates) msg << " [" << c.name << ": " << c.message << "]";
    throw ConvergenceError(msg.str());
  }
  report.winner = report.candidates[*best].name;
  report.converged = true;
  report.evolution = runs[*best].evolution;
  report.energy = report.evolution.energy;
  report.state = std::move(runs[*best].state);
  report.observables = measure(report.state, solver.spectral());
  return report;
}

namespace {

struct BranchPoint {
  double b_ext_mG = 0;
  SectorRun run;
  ObservableBundle observables;
};

// Runs the sector at each field in order, each start warm from the previous result.
std::vector<BranchPoint> follow_branch(const std::vector<double>& b_values, const SpinorField& first,
                                       GpeSolver& solver, const SolverParams& params) {
  std::vector<BranchPoint> out;
  SpinorField start = first;
  for (double b : b_values) {
    BranchPoint p{b, run_candidate(solver, start, b, params), {}};
    if (p.run.converged) start = p.run.state;
    p.observables = measure(p.run.state, solver.spectral());
    out.push_back(std::move(p));
  }
  return out;
}

double branch_energy(const BranchPoint& p) {
  return p.run.converged ? p.run.evolution.energy.total : std::numeric_limits<double>::quiet_NaN();
}

// Runs both sectors; in parallel when two workers are available.
std::array<BranchPoint, 2> run_pair(double b, const std::array<const SpinorField*, 2>& starts,
                                    std::array<GpeSolver*, 2> solvers, const SolverParams& params, bool parallel) {
  std::array<BranchPoint, 2> out;
  auto job = [&](int s) {
    out[s] = follow_branch({b}, *starts[s], *solvers[s], params).front();
  };
  if (parallel) {
    std::thread t(job, 1);
    job(0);
    t.join();
  } else {
    job(0);
    job(1);
  }
  return out;
}

std::optional<double> interpolate_root(double b0, double d0, double b1, double d1) {
  if (!std::isfinite(d0) || !std::isfinite(d1) || std::signbit(d0) == std::signbit(d1)) return std::nullopt;
  return b0 + d0 / (d0 - d1) * (b1 - b0);
}

}  // namespace

SweepResult transition_sweep(const std::vector<double>& b_values, double n_atoms, const FieldMaps& fields,
                             const CouplingConstants& couplings, double zeeman_per_mG, const SolverParams& params,
                             const SweepOptions& options) {
  if (b_values.empty()) throw std::invalid_argument("transition_sweep: empty field list");
  if (!std::is_sorted(b_values.begin(), b_values.end()) ||
      std::adjacent_find(b_values.begin(), b_values.end()) != b_values.end())
    throw std::invalid_argument("transition_sweep: field list must be strictly increasing");

  const double sigma = ansatz_width(fields, params);
  const bool parallel = options.threads >= 2;
  GpeSolver solver0(fields, couplings, zeeman_per_mG);
  GpeSolver solver1(fields, couplings, zeeman_per_mG);
  std::array<GpeSolver*, 2> solvers{&solver0, &solver1};
  const std::array<SpinorField, 2> ansatz{sector_ansatz(0, fields.grid, n_atoms, sigma),
                                          sector_ansatz(1, fields.grid, n_atoms, sigma)};

  std::array<std::vector<BranchPoint>, 2> branch;
  auto chain = [&](int s) { branch[s] = follow_branch(b_values, ansatz[s], *solvers[s], params); };
  if (parallel) {
    std::thread t(chain, 1);
    chain(0);
    t.join();
  } else {
    chain(0);
    chain(1);
  }

  // Every evaluated field, kept with its states for warm starts during bisection.
  std::vector<std::array<BranchPoint, 2>> points;
  for (std::size_t k = 0; k < b_values.size(); ++k)
    points.push_back({std::move(branch[0][k]), std::move(branch[1][k])});
  std::vector<bool> refined(points.size(), false);

  auto gap = [](const std::array<BranchPoint, 2>& p) { return branch_energy(p[0]) - branch_energy(p[1]); };

  SweepResult result;
  std::optional<std::size_t> bracket;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    if (interpolate_root(0, gap(points[k]), 1, gap(points[k + 1]))) {
      bracket = k;
      break;
    }

  if (bracket) {
    std::array<BranchPoint, 2> lo = points[*bracket];
    std::array<BranchPoint, 2> hi = points[*bracket + 1];
    while (hi[0].b_ext_mG - lo[0].b_ext_mG > options.refine_tol_mG) {
      const double mid = 0.5 * (lo[0].b_ext_mG + hi[0].b_ext_mG);
      auto p = run_pair(mid, {&lo[0].run.state, &lo[1].run.state}, solvers, params, parallel);
      const double g = gap(p);
      points.push_back(p);
      refined.push_back(true);
      if (!std::isfinite(g)) break;
      if (std::signbit(g) == std::signbit(gap(lo)))
        lo = std::move(p);
      else
        hi = std::move(p);
    }
    result.b_star = interpolate_root(lo[0].b_ext_mG, gap(lo), hi[0].b_ext_mG, gap(hi));
  } else {
    result.message = "no transition in range";
  }

  std::vector<std::size_t> order(points.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a][0].b_ext_mG < points[b][0].b_ext_mG; });

  for (std::size_t k : order) {
    const auto& p = points[k];
    SweepRow row;
    row.b_ext_mG = p[0].b_ext_mG;
    row.refinement = refined[k];
    for (int s = 0; s < 2; ++s) {
      row.converged[s] = p[s].run.converged;
      row.energy[s] = p[s].run.evolution.energy;
      row.observables[s] = p[s].observables;
      if (!p[s].run.converged) result.all_converged = false;
    }
    if (row.converged[0] && row.converged[1])
      row.winner_zeta = row.energy[1].total < row.energy[0].total ? 1 : 0;
    else
      row.winner_zeta = row.converged[1] ? 1 : 0;
    result.rows.push_back(std::move(row));
  }

  // Kinetic crossing: the sign change of Ekin0 - Ekin1 closest to B*.
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < result.rows.size(); ++k) {
    const auto& a = result.rows[k];
    const auto& b = result.rows[k + 1];
    if (!(a.converged[0] && a.converged[1] && b.converged[0] && b.converged[1])) continue;
    const auto root = interpolate_root(a.b_ext_mG, a.energy[0].kinetic - a.energy[1].kinetic, b.b_ext_mG,
                                       b.energy[0].kinetic - b.energy[1].kinetic);
    if (!root) continue;
    const double distance = result.b_star ? std::abs(*root - *result.b_star) : 0.0;
    if (distance < best_distance) {
      best_distance = distance;
      result.b_star_kinetic = root;
    }
  }
  return result;
}

}  // namespace sdol
