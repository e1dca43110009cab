#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdol/constants.hpp"
#include "sdol/lattice_field.hpp"
#include "sdol/observables.hpp"
#include "sdol/spectral.hpp"
#include "sdol/spinor_field.hpp"

/// Mean-field ground states of the spin-1 condensate in one lattice site.
///
/// Energy density (recoil units, lengths in lambda_l):
///   kappa |grad Psi|^2 + Psi^dag [V - B_fic.F - b F_z] Psi
///   + c0/2 n^2 + c2/2 |<F>|^2
/// with b the Zeeman energy of the external field. Ground states come from
/// imaginary-time Strang splitting with the local 3x3 spin exponential taken
/// exactly at every grid point.
namespace sdol {

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnergyDecomposition {
  double kinetic = 0;
  double scalar_potential = 0;
  double fictitious = 0;
  double zeeman = 0;
  double interaction_c0 = 0;
  double interaction_c2 = 0;
  /// From <Psi|H_mf|Psi> minus the double-counted interaction, a separate
  /// route from adding up the terms above.
  double total = 0;

  double sum_of_terms() const {
    return kinetic + scalar_potential + fictitious + zeeman + interaction_c0 + interaction_c2;
  }
};

struct SolverParams {
  double dtau = 1e-4;
  double min_dtau = 1e-6;       // floor for step reductions after a residual failure
  long max_iters = 400000;
  double energy_tol = 1e-10;    // relative energy change over one check interval
  int check_interval = 100;
  double residual_tol = 1e-6;
  double monotonic_tol = 1e-10; // allowed relative energy rise between checks
  double noise_amplitude = 0.02;
  std::uint64_t seed = 0;
  std::vector<int> restart_sectors{0, 1};
  double sigma = 0;             // ansatz width; 0 selects the harmonic length
  bool record_history = false;  // energy and zeta after every step (slow)
};

/// Snapshot of one imaginary-time run.
struct EvolutionResult {
  bool converged = false;
  long iterations = 0;
  double dtau = 0;         // final step
  EnergyDecomposition energy;
  double mu = 0;
  double residual = 0;
  double zeta_initial = 0;
  double zeta_max_drift = 0;   // over the checks (every step with record_history)
  double norm_max_error = 0;   // relative, over all steps
  double max_energy_rise = 0;  // relative, after the first 10 steps
  std::vector<double> energy_history;
  std::string message;
};

/// Holds the field maps, FFT plans and scratch space for one (fields,
/// couplings) combination. Not thread-safe; use one per worker.
class GpeSolver {
 public:
  GpeSolver(const FieldMaps& fields, const CouplingConstants& couplings, double zeeman_per_mG);

  const FieldMaps& fields() const { return fields_; }
  const SpectralGrid& spectral() const { return spectral_; }
  const CouplingConstants& couplings() const { return couplings_; }

  /// Throws DivergenceError naming the first non-finite term.
  EnergyDecomposition energy(const SpinorField& state, double b_ext_mG);

  /// One Strang step: half local, full kinetic, half local, renormalise.
  void step(SpinorField& state, double b_ext_mG, double dtau);

  /// H_mf Psi into `out` (same grid and layout as the state).
  void apply_hamiltonian(const SpinorField& state, double b_ext_mG, SpinorField& out);

  /// ||H Psi - mu Psi|| / ||mu Psi|| with mu = <Psi|H|Psi>/N.
  double residual(const SpinorField& state, double b_ext_mG, double* mu_out = nullptr);

  /// Imaginary-time evolution until the energy settles and the residual passes.
  /// When the residual fails the step is halved (down to min_dtau) and the
  /// run continues. Throws StepSizeError on an energy rise above monotonic_tol.
  EvolutionResult evolve(SpinorField& state, double b_ext_mG, const SolverParams& params);

 private:
  // Returns the norm after the step.
  double local_step(SpinorField& state, double b_ext_mG, double tau);
  void rescale(SpinorField& state, double norm);
  void kinetic_step(SpinorField& state, double dtau);

  const FieldMaps& fields_;
  CouplingConstants couplings_;
  double zeeman_per_mG_;
  SpectralGrid spectral_;
  ComplexGrid work_;
  std::array<std::vector<double>, 4> mid_;  // predicted n, Fx, Fy, Fz
  std::vector<double> kinetic_factor_;
  double kinetic_factor_dtau_ = -1;
};

EnergyDecomposition energy_functional(const SpinorField& state, const FieldMaps& fields, double b_ext_mG,
                                      const CouplingConstants& couplings, double zeeman_per_mG);

/// Single step with an energy check; throws StepSizeError if the energy rises
/// by more than `tolerance` relative.
void imaginary_time_step(SpinorField& state, const FieldMaps& fields, double b_ext_mG,
                         const CouplingConstants& couplings, double zeeman_per_mG, double dtau,
                         double tolerance = 1e-10);

/// Component m_F gets winding zeta - m_F on a Gaussian of width sigma:
/// (x + i y)^m exp(-r^2 / 2 sigma^2), conjugated for negative m. |zeta| <= 3.
SpinorField sector_ansatz(int zeta, const GridSpec& grid, double n_atoms, double sigma);

/// Adds complex Gaussian noise of relative size `amplitude` (of the peak
/// amplitude) to every component and renormalises. Deterministic in `seed`.
void add_noise(SpinorField& state, double amplitude, std::uint64_t seed);

struct CandidateSummary {
  std::string name;  // "zeta=0", "zeta=1", "noise"
  bool converged = false;
  double energy = 0;
  long iterations = 0;
  double zeta_measured = 0;
  std::string message;
};

struct GroundStateReport {
  double b_ext_mG = 0;
  SpinorField state;
  EnergyDecomposition energy;
  ObservableBundle observables;
  EvolutionResult evolution;
  std::string winner;
  bool converged = false;
  std::vector<CandidateSummary> candidates;
};

/// Runs every restart sector, then restarts from the best of them with seeded
/// noise that breaks the axial symmetry, and keeps the lowest converged
/// energy. Throws ConvergenceError if no candidate converges.
GroundStateReport find_ground_state(double b_ext_mG, double n_atoms, GpeSolver& solver, const SolverParams& params);

struct SweepRow {
  double b_ext_mG = 0;
  std::array<EnergyDecomposition, 2> energy;  // sector zeta = 0, 1
  std::array<bool, 2> converged{};
  std::array<ObservableBundle, 2> observables;
  int winner_zeta = 0;
  bool refinement = false;  // added by the bisection
};

struct SweepOptions {
  double refine_tol_mG = 0.5;
  int threads = 1;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by field
  std::optional<double> b_star;            // total-energy crossing
  std::optional<double> b_star_kinetic;    // kinetic-energy crossing (interpolated)
  bool all_converged = true;
  std::string message;
};

/// Follows the zeta = 0 and zeta = 1 branches across the monotone field list
/// with warm starts, then bisects the first sign change of E0 - E1.
SweepResult transition_sweep(const std::vector<double>& b_values, double n_atoms, const FieldMaps& fields,
                             const CouplingConstants& couplings, double zeeman_per_mG, const SolverParams& params,
                             const SweepOptions& options = {});

}  // namespace sdol
