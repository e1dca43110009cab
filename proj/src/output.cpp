#include "sdol/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

namespace sdol {
namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class... T>
void append_row(std::string& out, char sep, const T&... values) {
  bool first = true;
  ((out += (first ? "" : std::string(1, sep)), out += num(static_cast<double>(values)), first = false), ...);
  out += '\n';
}

HeaderFields grid_fields(const GridSpec& g) {
  return {{"grid_points", std::to_string(g.points)}, {"box_side_lambda", num(g.side)}};
}

}  // namespace

std::string file_header(const std::string& kind, const RunConfig& config, const HeaderFields& extra) {
  std::string out = "# sdol " + std::string(tool_version) + " " + kind + "\n";
  out += "# config_hash " + config.hash() + "\n";
  out += "# intensity_W_cm2 " + num(config.intensity_W_cm2) + "\n";
  out += "# lambda_l_nm " + num(config.wavelength_nm) + "\n";
  out += "# units length=lambda_l energy=E_rec\n";
  for (const auto& [k, v] : extra) out += "# " + k + " " + v + "\n";
  return out;
}

void ensure_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string format_field_dump(const FieldMaps& maps, const RunConfig& config) {
  auto extra = grid_fields(maps.grid);
  extra.push_back({"field_model", to_string(maps.model)});
  extra.push_back({"columns", "x y V Bx By"});
  for (const auto& w : maps.warnings) extra.push_back({"warning", w});
  std::string out = file_header("field_maps", config, extra);
  out.reserve(out.size() + maps.grid.size() * 90);
  for (int i = 0; i < maps.grid.points; ++i)
    for (int j = 0; j < maps.grid.points; ++j) {
      const auto k = maps.index(i, j);
      append_row(out, ' ', maps.grid.coordinate(i), maps.grid.coordinate(j), maps.V[k], maps.Bx[k], maps.By[k]);
    }
  return out;
}

std::string format_radial_profile(const LightShift& shift, double r_max, int samples, const RunConfig& config) {
  const auto peak = isotropic_field_maximum(shift);
  std::string out = file_header("radial_profile", config,
                                {{"B_max_recoil", num(peak.value)}, {"B_max_radius_lambda", num(peak.radius)}});
  out += "r,V,B\n";
  for (int k = 0; k < samples; ++k) {
    const double r = r_max * k / (samples - 1);
    const auto p = isotropic_profiles(r, shift);
    append_row(out, ',', r, p.V, p.B);
  }
  return out;
}

std::string format_polarizability_scan(const AtomSpec& atom, const RunConfig& config) {
  const double omega_l = angular_frequency(config.wavelength_nm * 1e-9);
  std::string out = file_header("polarizability_scan", config,
                                {{"omega_l_rad_s", num(omega_l)}, {"ratio_at_omega_l", num(polarizability_ratio(omega_l, atom))}});
  out += "omega_rad_s,wavelength_nm,alpha0_SI,alpha1_SI,ratio\n";
  for (int k = 0; k < config.scan_points; ++k) {
    const double nm = config.scan_min_nm + (config.scan_max_nm - config.scan_min_nm) * k / (config.scan_points - 1);
    const double omega = angular_frequency(nm * 1e-9);
    try {
      const auto p = polarizabilities(omega, atom);
      append_row(out, ',', omega, nm, p.alpha0, p.alpha1, p.alpha0 != 0 ? p.alpha1 / p.alpha0 : NAN);
    } catch (const ResonanceError&) {
      continue;
    }
  }
  return out;
}

std::string format_levels(const std::vector<LevelRow>& rows, const RunConfig& config, const HeaderFields& extra) {
  std::string out = file_header("levels", config, extra);
  out += "B_ext_mG,zeta,n,energy_recoil\n";
  for (const auto& r : rows) append_row(out, ',', r.b_ext_mG, r.zeta, r.n, r.energy);
  return out;
}

std::string format_intensity_scan(const std::vector<IntensityGap>& scan, double b_ext_mG, const RunConfig& config) {
  std::string out =
      file_header("intensity_scan", config, {{"crossing_intensity_W_cm2", num(crossing_intensity(scan))}});
  out += "intensity_W_cm2,B_ext_mG,gap_recoil\n";
  for (const auto& g : scan) append_row(out, ',', g.intensity_W_cm2, b_ext_mG, g.gap);
  return out;
}

std::string format_state_dump(const GroundStateReport& report, const RunConfig& config) {
  const auto& s = report.state;
  const auto& e = report.energy;
  auto extra = grid_fields(s.grid);
  extra.insert(extra.end(), {{"B_ext_mG", num(report.b_ext_mG)},
                             {"n_atoms", num(s.n_atoms)},
                             {"winner", report.winner},
                             {"energy_total", num(e.total)},
                             {"energy_kinetic", num(e.kinetic)},
                             {"energy_scalar_potential", num(e.scalar_potential)},
                             {"energy_fictitious", num(e.fictitious)},
                             {"energy_zeeman", num(e.zeeman)},
                             {"energy_interaction_c0", num(e.interaction_c0)},
                             {"energy_interaction_c2", num(e.interaction_c2)},
                             {"columns", "x y re_p1 im_p1 re_0 im_0 re_m1 im_m1"}});
  std::string out = file_header("state", config, extra);
  for (int i = 0; i < s.grid.points; ++i)
    for (int j = 0; j < s.grid.points; ++j) {
      const auto k = static_cast<std::size_t>(i) * s.grid.points + j;
      append_row(out, ' ', s.grid.coordinate(i), s.grid.coordinate(j), s.psi[0][k].real(), s.psi[0][k].imag(),
                 s.psi[1][k].real(), s.psi[1][k].imag(), s.psi[2][k].real(), s.psi[2][k].imag());
    }
  return out;
}

std::string format_texture(const std::vector<TexturePoint>& texture, double b_ext_mG, const RunConfig& config) {
  std::string out = file_header("spin_texture", config, {{"B_ext_mG", num(b_ext_mG)}, {"columns", "x y Fx Fy Fz density"}});
  for (const auto& p : texture) append_row(out, ' ', p.x, p.y, p.fx, p.fy, p.fz, p.density);
  return out;
}

std::string format_sweep(const SweepResult& sweep, double b_fic_max, const RunConfig& config) {
  std::string out = file_header("sweep", config,
                                {{"n_atoms", num(config.n_atoms)}, {"B_fic_max_mG", num(b_fic_max)}});
  out += "B_mG,E_zeta0,E_zeta1,Ekin_zeta0,Ekin_zeta1,winner_zeta,N_p1,N_0,N_m1,Fz_mean,lz_p1,lz_0,lz_m1\n";
  for (const auto& r : sweep.rows) {
    const auto& ob = r.observables[r.winner_zeta];
    const auto e0 = r.converged[0] ? r.energy[0].total : NAN;
    const auto e1 = r.converged[1] ? r.energy[1].total : NAN;
    const auto k0 = r.converged[0] ? r.energy[0].kinetic : NAN;
    const auto k1 = r.converged[1] ? r.energy[1].kinetic : NAN;
    append_row(out, ',', r.b_ext_mG, e0, e1, k0, k1, r.winner_zeta, ob.populations[0], ob.populations[1],
               ob.populations[2], ob.angular.fz_mean, ob.angular.lz[0], ob.angular.lz[1], ob.angular.lz[2]);
  }
  if (sweep.b_star) {
    out += "# B_star_mG " + num(*sweep.b_star) + "\n";
    out += "# B_star_over_B_fic_max " + num(*sweep.b_star / b_fic_max) + "\n";
  } else {
    out += "# " + (sweep.message.empty() ? std::string("no transition in range") : sweep.message) + "\n";
  }
  if (sweep.b_star_kinetic) out += "# B_star_kinetic_mG " + num(*sweep.b_star_kinetic) + "\n";
  return out;
}

std::string format_ground_report(const GroundStateReport& report, const RunConfig& config) {
  using nlohmann::json;
  const auto& e = report.energy;
  const auto& ob = report.observables;
  json windings = json::array();
  for (const auto& w : ob.windings) windings.push_back(w ? json(*w) : json(nullptr));
  json candidates = json::array();
  for (const auto& c : report.candidates)
    candidates.push_back({{"name", c.name},
                          {"converged", c.converged},
                          {"energy", c.energy},
                          {"iterations", c.iterations},
                          {"zeta_measured", c.zeta_measured},
                          {"message", c.message}});
  const json j = {
      {"tool", "sdol"},
      {"version", tool_version},
      {"config_hash", config.hash()},
      {"B_ext_mG", report.b_ext_mG},
      {"n_atoms", report.state.n_atoms},
      {"converged", report.converged},
      {"winner", report.winner},
      {"iterations", report.evolution.iterations},
      {"dtau_final", report.evolution.dtau},
      {"residual", report.evolution.residual},
      {"mu", report.evolution.mu},
      {"energy",
       {{"total", e.total},
        {"kinetic", e.kinetic},
        {"scalar_potential", e.scalar_potential},
        {"fictitious", e.fictitious},
        {"zeeman", e.zeeman},
        {"interaction_c0", e.interaction_c0},
        {"interaction_c2", e.interaction_c2}}},
      {"populations", ob.populations},
      {"Fz_mean", ob.angular.fz_mean},
      {"lz", ob.angular.lz},
      {"abs_lz_mean", ob.angular.abs_lz_mean},
      {"zeta_measured", ob.angular.zeta_measured},
      {"windings", windings},
      {"zeta_from_windings", ob.zeta_from_windings ? json(*ob.zeta_from_windings) : json(nullptr)},
      {"candidates", candidates},
  };
  return j.dump(2) + "\n";
}

}  // namespace sdol
