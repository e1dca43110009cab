// End-to-end runs of the command-line driver on small problems.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sdol_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SDOL_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column names
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const char* tiny_ground =
    "[grid]\npoints = 32\n"
    "[field]\nb_list_mG = 40\n"
    "[solver]\nenergy_tol = 1e-8\nresidual_tol = 1e-3\n";

}  // namespace

TEST_CASE("cli: potential writes headed files at the default intensity") {
  const auto dir = scratch("potential");
  const auto cfg = write_config(dir, "[grid]\npoints = 16\n");
  REQUIRE(run("--config " + cfg.string() + " --out " + (dir / "out").string() + " potential", dir / "log") == 0);
  for (const char* name : {"field_maps.txt", "radial_profile.csv"}) {
    const auto text = slurp(dir / "out" / name);
    REQUIRE(!text.empty());
    CHECK(text.rfind("# sdol ", 0) == 0);
    CHECK(text.find("# config_hash ") != std::string::npos);
    CHECK(text.find("# intensity_W_cm2 70\n") != std::string::npos);
  }
}

TEST_CASE("cli: unwritable output directory is an error") {
  const auto dir = scratch("unwritable");
  std::ofstream(dir / "file") << "x";
  CHECK(run("--out " + (dir / "file" / "sub").string() + " potential", dir / "log") != 0);
}

TEST_CASE("cli: single-atom level diagram") {
  const auto dir = scratch("single");
  const auto cfg = write_config(dir, "[field]\nb_step_mG = 2\n");
  REQUIRE(run("--config " + cfg.string() + " --out " + dir.string() + " single-atom", dir / "log") == 0);
  const auto rows = csv_rows(dir / "levels.csv");
  // (B, zeta) -> energies by n
  std::map<std::pair<double, int>, std::vector<double>> levels;
  for (const auto& r : rows) {
    REQUIRE(r.size() == 4);
    levels[{std::stod(r[0]), std::stoi(r[1])}].push_back(std::stod(r[3]));
  }
  for (const auto& [key, e] : levels) CHECK(e.size() >= 5);

  // At zero field the +zeta and -zeta columns coincide.
  for (int zeta = 1; zeta <= 3; ++zeta) {
    const auto& plus = levels.at({0.0, zeta});
    const auto& minus = levels.at({0.0, -zeta});
    for (std::size_t k = 0; k < plus.size(); ++k) CHECK(plus[k] == doctest::Approx(minus[k]).epsilon(1e-9));
  }

  // The ground-level crossing between zeta = 0 and zeta = 1, from the table alone.
  double previous_b = 0, previous_gap = 0, crossing = -1;
  for (double b = 0; b <= 100; b += 2) {
    const double gap = levels.at({b, 0})[0] - levels.at({b, 1})[0];
    if (b > 0 && previous_gap < 0 && gap >= 0) crossing = previous_b + (b - previous_b) * -previous_gap / (gap - previous_gap);
    previous_b = b;
    previous_gap = gap;
  }
  CHECK(crossing > 63);
  CHECK(crossing < 83);
}

TEST_CASE("cli: ground reruns are byte-identical") {
  const auto dir = scratch("ground");
  const auto cfg = write_config(dir, tiny_ground);
  const auto out = dir / "out";
  std::map<std::string, std::string> first;
  REQUIRE(run("--config " + cfg.string() + " --out " + out.string() + " --seed 7 ground", dir / "log1") == 0);
  for (const auto& e : fs::directory_iterator(out)) first[e.path().filename().string()] = slurp(e.path());
  CHECK(first.size() == 3);
  fs::remove_all(out);
  REQUIRE(run("--config " + cfg.string() + " --out " + out.string() + " --seed 7 ground", dir / "log2") == 0);
  std::map<std::string, std::string> second;
  for (const auto& e : fs::directory_iterator(out)) second[e.path().filename().string()] = slurp(e.path());
  CHECK(first == second);
  CHECK(slurp(dir / "log1") == slurp(dir / "log2"));
}

TEST_CASE("cli: convergence failure exits nonzero and leaves diagnostics") {
  const auto dir = scratch("fail");
  const auto cfg = write_config(dir, std::string(tiny_ground) + "max_iters = 3\n");
  CHECK(run("--config " + cfg.string() + " --out " + dir.string() + " ground", dir / "log") == 1);
  const auto diag = slurp(dir / "diagnostics_B40mG.txt");
  CHECK(diag.rfind("# sdol ", 0) == 0);
  CHECK(diag.find("zeta=0") != std::string::npos);
}

TEST_CASE("cli: bad arguments") {
  const auto dir = scratch("args");
  CHECK(run("", dir / "log") != 0);
  CHECK(run("frobnicate", dir / "log") != 0);
  CHECK(run("--config /nonexistent.cfg potential", dir / "log") != 0);
}
