// Command-line driver: one subcommand per workflow, all output as text files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sdol/config.hpp"
#include "sdol/gpe.hpp"
#include "sdol/lattice_field.hpp"
#include "sdol/output.hpp"
#include "sdol/polarizability.hpp"
#include "sdol/single_atom.hpp"

namespace fs = std::filesystem;
using namespace sdol;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : RunConfig::load(g.config_path);
  cfg.apply_environment();
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  if (g.threads) cfg.threads = *g.threads;
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  return cfg;
}

std::string tag(double b) {
  std::ostringstream s;
  s << "B" << b << "mG";
  return s.str();
}

int cmd_potential(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  ensure_output_dir(dir);
  const auto shift = cfg.light_shift();
  const auto maps = render_field_maps(cfg.grid(), shift, cfg.model());
  write_text(dir / "field_maps.txt", format_field_dump(maps, cfg));
  write_text(dir / "radial_profile.csv", format_radial_profile(shift, cell_inscribed_radius(), 401, cfg));
  const auto peak = isotropic_field_maximum(shift);
  const double per_mG = zeeman_energy_per_mG(cfg.atom(), cfg.units());
  std::printf("V(0) = %.6g E_rec, max B_fic = %.6g E_rec = %.6g mG at r = %.4g lambda_l\n",
              isotropic_profiles(0.0, shift).V, peak.value, peak.value / per_mG, peak.radius);
  for (const auto& w : maps.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return 0;
}

int cmd_polarizability(const RunConfig& cfg, bool scan) {
  const auto atom = cfg.atom();
  const double omega = angular_frequency(cfg.wavelength_nm * 1e-9);
  const auto p = polarizabilities(omega, atom);
  std::printf("omega_l = %.8g rad/s\nalpha0 = %.8g C^2 m^2/J\nalpha1 = %.8g C^2 m^2/J\nratio = %.8g\n", omega,
              p.alpha0, p.alpha1, p.alpha1 / p.alpha0);
  if (scan) {
    const fs::path dir = cfg.output_dir;
    ensure_output_dir(dir);
    write_text(dir / "polarizability_scan.csv", format_polarizability_scan(atom, cfg));
  }
  return 0;
}

int cmd_single_atom(const RunConfig& cfg, bool intensity_scan) {
  const fs::path dir = cfg.output_dir;
  ensure_output_dir(dir);
  const auto grid = cfg.radial_grid();
  const auto pots = RadialPotentials::isotropic(grid, cfg.light_shift());
  const double per_mG = zeeman_energy_per_mG(cfg.atom(), cfg.units());
  const auto b_values = cfg.b_values();

  std::vector<LevelRow> rows;
  for (double b : b_values)
    for (int zeta : cfg.zetas) {
      const auto s = solve_sector({zeta, b}, grid, pots, per_mG, cfg.levels);
      for (int k = 0; k < cfg.levels; ++k) rows.push_back({b, zeta, s.principal(k), s.eigenvalues[k]});
    }
  HeaderFields extra;
  for (int other : {1, -1}) {
    const auto c = ground_crossing_field(other, b_values.front(), b_values.back(), grid, pots, per_mG);
    const std::string key = "ground_crossing_zeta" + std::to_string(other) + "_mG";
    extra.push_back({key, c.found ? std::to_string(c.b_ext_mG) : "none"});
    if (c.found) std::printf("ground level crosses zeta=%+d at %.3f mG\n", other, c.b_ext_mG);
  }
  write_text(dir / "levels.csv", format_levels(rows, cfg, extra));

  if (intensity_scan) {
    std::vector<double> intensities;
    for (int k = 1; k <= 40; ++k) intensities.push_back(5.0 * k);
    const ShiftAtIntensity shift_at = [&](double i) { return cfg.light_shift_at(i); };
    for (double b : b_values) {
      if (b <= 0) continue;
      const auto scan = crossing_intensity_scan(b, intensities, shift_at, grid, per_mG);
      write_text(dir / ("intensity_scan_" + tag(b) + ".csv"), format_intensity_scan(scan, b, cfg));
      std::printf("B = %g mG: crossing intensity %.4g W/cm^2\n", b, crossing_intensity(scan));
    }
  }
  return 0;
}

int cmd_ground(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  ensure_output_dir(dir);
  const auto maps = render_field_maps(cfg.grid(), cfg.light_shift(), cfg.model());
  GpeSolver solver(maps, cfg.couplings(), zeeman_energy_per_mG(cfg.atom(), cfg.units()));
  const auto params = cfg.solver();
  int status = 0;
  for (double b : cfg.b_values()) {
    try {
      const auto report = find_ground_state(b, cfg.n_atoms, solver, params);
      write_text(dir / ("state_" + tag(b) + ".txt"), format_state_dump(report, cfg));
      write_text(dir / ("texture_" + tag(b) + ".txt"), format_texture(report.observables.texture, b, cfg));
      write_text(dir / ("report_" + tag(b) + ".json"), format_ground_report(report, cfg));
      const auto& w = report.observables.windings;
      auto show = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("?"); };
      std::printf("B = %g mG: %s, E = %.10g, windings (%s, %s, %s), zeta = %.6f\n", b, report.winner.c_str(),
                  report.energy.total, show(w[0]).c_str(), show(w[1]).c_str(), show(w[2]).c_str(),
                  report.observables.angular.zeta_measured);
    } catch (const ConvergenceError& e) {
      write_text(dir / ("diagnostics_" + tag(b) + ".txt"),
                 file_header("diagnostics", cfg, {{"B_ext_mG", std::to_string(b)}}) + e.what() + "\n");
      std::fprintf(stderr, "B = %g mG: %s\n", b, e.what());
      status = 1;
    }
  }
  return status;
}

int cmd_sweep(const RunConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  ensure_output_dir(dir);
  const auto shift = cfg.light_shift();
  const auto maps = render_field_maps(cfg.grid(), shift, cfg.model());
  const double per_mG = zeeman_energy_per_mG(cfg.atom(), cfg.units());
  const auto sweep = transition_sweep(cfg.b_values(), cfg.n_atoms, maps, cfg.couplings(), per_mG, cfg.solver(),
                                      {cfg.refine_tol_mG, cfg.threads});
  const double b_fic_max = isotropic_field_maximum(shift).value / per_mG;
  write_text(dir / "sweep.csv", format_sweep(sweep, b_fic_max, cfg));
  if (sweep.b_star)
    std::printf("B* = %.3f mG, B*/max B_fic = %.4f\n", *sweep.b_star, *sweep.b_star / b_fic_max);
  else
    std::printf("%s\n", sweep.message.c_str());
  if (sweep.b_star_kinetic) std::printf("kinetic crossing at %.3f mG\n", *sweep.b_star_kinetic);
  if (!sweep.all_converged) {
    std::fprintf(stderr, "some sweep points did not converge\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-1 rotor in a spin-dependent optical lattice site"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "Output directory (overrides config and SDOL_OUTPUT_DIR)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for the symmetry-breaking restart");

  auto* potential = app.add_subcommand("potential", "Dump V and B_fic maps and the isotropic profiles");
  bool scan = false;
  auto* polar = app.add_subcommand("polarizability", "Print alpha0, alpha1 and their ratio at the laser frequency");
  polar->add_flag("--scan", scan, "Also write polarizability_scan.csv over the configured wavelength range");
  bool intensity_scan = false;
  auto* single = app.add_subcommand("single-atom", "Level diagram of one atom versus B_ext");
  single->add_flag("--intensity-scan", intensity_scan, "Also scan the zeta=0/zeta=1 gap versus intensity");
  auto* ground = app.add_subcommand("ground", "Mean-field ground state at each configured B_ext");
  auto* sweep = app.add_subcommand("sweep", "Follow both sectors across the B_ext range and locate the transition");
  for (auto* sub : {potential, polar, single, ground, sweep}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(g);
    if (*potential) return cmd_potential(cfg);
    if (*polar) return cmd_polarizability(cfg, scan);
    if (*single) return cmd_single_atom(cfg, intensity_scan);
    if (*ground) return cmd_ground(cfg);
    if (*sweep) return cmd_sweep(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
