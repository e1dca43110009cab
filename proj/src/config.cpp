#include "sdol/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

namespace sdol {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, value);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("config: cannot parse '" + text + "' for " + key);
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<T>(item, key));
  }
  return out;
}

// One entry per key: how to print it and how to read it back.
struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> print;
  std::function<void(RunConfig&, const std::string&)> read;
};

template <class T>
Field number(std::string section, std::string key, T RunConfig::*member) {
  const std::string name = section + "." + key;
  return {section, key,
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
              return format_double(c.*member);
            else
              return std::to_string(c.*member);
          },
          [member, name](RunConfig& c, const std::string& v) { c.*member = parse_number<T>(v, name); }};
}

template <class T>
Field list(std::string section, std::string key, std::vector<T> RunConfig::*member) {
  const std::string name = section + "." + key;
  return {section, key,
          [member](const RunConfig& c) {
            std::string out;
            for (std::size_t k = 0; k < (c.*member).size(); ++k) {
              if (k) out += ", ";
              if constexpr (std::is_floating_point_v<T>)
                out += format_double((c.*member)[k]);
              else
                out += std::to_string((c.*member)[k]);
            }
            return out;
          },
          [member, name](RunConfig& c, const std::string& v) { c.*member = parse_list<T>(v, name); }};
}

Field text(std::string section, std::string key, std::string RunConfig::*member) {
  return {section, key, [member](const RunConfig& c) { return c.*member; },
          [member](RunConfig& c, const std::string& v) { c.*member = v; }};
}

Field flag(std::string section, std::string key, bool RunConfig::*member) {
  const std::string name = section + "." + key;
  return {section, key, [member](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); },
          [member, name](RunConfig& c, const std::string& v) {
            if (v == "true" || v == "1" || v == "on")
              c.*member = true;
            else if (v == "false" || v == "0" || v == "off")
              c.*member = false;
            else
              throw ConfigError("config: expected true/false for " + name + ", got '" + v + "'");
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      number("atom", "mass_u", &RunConfig::mass_u),
      number("atom", "nuclear_spin", &RunConfig::nuclear_spin),
      number("atom", "g_factor", &RunConfig::g_factor),
      number("atom", "a0_nm", &RunConfig::a0_nm),
      number("atom", "a2_nm", &RunConfig::a2_nm),
      number("atom", "d1_wavelength_nm", &RunConfig::d1_wavelength_nm),
      number("atom", "d2_wavelength_nm", &RunConfig::d2_wavelength_nm),
      number("atom", "d1_dipole_eab", &RunConfig::d1_dipole_eab),
      number("atom", "d2_dipole_eab", &RunConfig::d2_dipole_eab),
      number("laser", "intensity_W_cm2", &RunConfig::intensity_W_cm2),
      number("laser", "wavelength_nm", &RunConfig::wavelength_nm),
      number("grid", "side", &RunConfig::side),
      number("grid", "points", &RunConfig::points),
      text("grid", "field_model", &RunConfig::field_model),
      number("radial", "r_max", &RunConfig::r_max),
      number("radial", "points", &RunConfig::radial_points),
      number("radial", "levels", &RunConfig::levels),
      list("radial", "zetas", &RunConfig::zetas),
      number("field", "b_start_mG", &RunConfig::b_start_mG),
      number("field", "b_stop_mG", &RunConfig::b_stop_mG),
      number("field", "b_step_mG", &RunConfig::b_step_mG),
      list("field", "b_list_mG", &RunConfig::b_list_mG),
      number("system", "n_atoms", &RunConfig::n_atoms),
      flag("system", "interactions", &RunConfig::interactions),
      number("solver", "dtau", &RunConfig::dtau),
      number("solver", "min_dtau", &RunConfig::min_dtau),
      number("solver", "max_iters", &RunConfig::max_iters),
      number("solver", "energy_tol", &RunConfig::energy_tol),
      number("solver", "check_interval", &RunConfig::check_interval),
      number("solver", "residual_tol", &RunConfig::residual_tol),
      number("solver", "noise_amplitude", &RunConfig::noise_amplitude),
      number("solver", "sigma", &RunConfig::sigma),
      number("sweep", "refine_tol_mG", &RunConfig::refine_tol_mG),
      number("polarizability", "scan_min_nm", &RunConfig::scan_min_nm),
      number("polarizability", "scan_max_nm", &RunConfig::scan_max_nm),
      number("polarizability", "scan_points", &RunConfig::scan_points),
      text("run", "output_dir", &RunConfig::output_dir),
      number("run", "threads", &RunConfig::threads),
      number("run", "seed", &RunConfig::seed),
  };
  return table;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& input) {
  std::map<std::string, const Field*> index;
  for (const auto& f : fields()) index[f.section + "." + f.key] = &f;

  RunConfig cfg;
  std::string section;
  std::istringstream in(input);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string name = section + "." + trim(line.substr(0, eq));
    const auto it = index.find(name);
    if (it == index.end()) throw ConfigError("config line " + std::to_string(line_no) + ": unknown key " + name);
    it->second->read(cfg, trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.print(*this) + "\n";
  }
  return out;
}

void RunConfig::apply_environment() {
  if (const char* dir = std::getenv("SDOL_OUTPUT_DIR"); dir && *dir) output_dir = dir;
  if (const char* t = std::getenv("SDOL_THREADS"); t && *t) threads = parse_number<int>(t, "SDOL_THREADS");
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw ConfigError(std::string("config: ") + name + " must be positive");
  };
  positive(mass_u, "atom.mass_u");
  positive(nuclear_spin, "atom.nuclear_spin");
  positive(a0_nm, "atom.a0_nm");
  positive(a2_nm, "atom.a2_nm");
  positive(d1_wavelength_nm, "atom.d1_wavelength_nm");
  positive(d2_wavelength_nm, "atom.d2_wavelength_nm");
  positive(intensity_W_cm2, "laser.intensity_W_cm2");
  positive(wavelength_nm, "laser.wavelength_nm");
  positive(side, "grid.side");
  positive(n_atoms, "system.n_atoms");
  positive(dtau, "solver.dtau");
  positive(min_dtau, "solver.min_dtau");
  positive(energy_tol, "solver.energy_tol");
  positive(residual_tol, "solver.residual_tol");
  positive(refine_tol_mG, "sweep.refine_tol_mG");
  if (g_factor < 0) throw ConfigError("config: atom.g_factor must be non-negative");
  if (points < 4 || points % 2) throw ConfigError("config: grid.points must be even and at least 4");
  if (radial_points < 200) throw ConfigError("config: radial.points must be at least 200");
  if (r_max < 0.3) throw ConfigError("config: radial.r_max must be at least 0.3");
  if (levels < 1) throw ConfigError("config: radial.levels must be at least 1");
  if (zetas.empty()) throw ConfigError("config: radial.zetas is empty");
  if (max_iters < 1 || check_interval < 1) throw ConfigError("config: solver iteration counts must be positive");
  if (noise_amplitude < 0) throw ConfigError("config: solver.noise_amplitude must be non-negative");
  if (threads < 1) throw ConfigError("config: run.threads must be at least 1");
  if (scan_points < 2 || !(scan_min_nm > 0) || !(scan_max_nm > scan_min_nm))
    throw ConfigError("config: polarizability scan range is invalid");
  field_model_from_string(field_model);
  if (b_list_mG.empty()) {
    if (!(b_step_mG > 0) || b_stop_mG < b_start_mG) throw ConfigError("config: field range must be increasing");
  } else {
    for (std::size_t k = 1; k < b_list_mG.size(); ++k)
      if (!(b_list_mG[k] > b_list_mG[k - 1])) throw ConfigError("config: field.b_list_mG must be increasing");
  }
}

std::string RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AtomSpec RunConfig::atom() const {
  const double ea = codata::elementary_charge * codata::bohr_radius;
  AtomSpec a;
  a.mass = mass_u * codata::atomic_mass_unit;
  a.nuclear_spin = nuclear_spin;
  a.g_factor = g_factor;
  a.a0 = a0_nm * 1e-9;
  a.a2 = a2_nm * 1e-9;
  a.d_half = d1_dipole_eab * ea;
  a.d_threehalf = d2_dipole_eab * ea;
  a.omega_half = angular_frequency(d1_wavelength_nm * 1e-9);
  a.omega_threehalf = angular_frequency(d2_wavelength_nm * 1e-9);
  a.validate();
  return a;
}

UnitSystem RunConfig::units() const { return UnitSystem(atom(), wavelength_nm * 1e-9); }

BeamConfig RunConfig::beams() const { return BeamConfig::from_W_per_cm2(intensity_W_cm2, wavelength_nm * 1e-9); }

LightShift RunConfig::light_shift() const { return light_shift_at(intensity_W_cm2); }

LightShift RunConfig::light_shift_at(double intensity) const {
  return LightShift::from_beams(BeamConfig::from_W_per_cm2(intensity, wavelength_nm * 1e-9), atom(), units());
}

GridSpec RunConfig::grid() const { return {side, points}; }

FieldModel RunConfig::model() const { return field_model_from_string(field_model); }

RadialGrid RunConfig::radial_grid() const { return {r_max, radial_points}; }

CouplingConstants RunConfig::couplings() const {
  if (!interactions) return {0.0, 0.0};
  return contact_couplings(atom(), units());
}

SolverParams RunConfig::solver() const {
  SolverParams p;
  p.dtau = dtau;
  p.min_dtau = min_dtau;
  p.max_iters = max_iters;
  p.energy_tol = energy_tol;
  p.check_interval = check_interval;
  p.residual_tol = residual_tol;
  p.noise_amplitude = noise_amplitude;
  p.sigma = sigma;
  p.seed = seed;
  return p;
}

std::vector<double> RunConfig::b_values() const {
  if (!b_list_mG.empty()) return b_list_mG;
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((b_stop_mG - b_start_mG) / b_step_mG + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(b_start_mG + k * b_step_mG);
  return out;
}

}  // namespace sdol
