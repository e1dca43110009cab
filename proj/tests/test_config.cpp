#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "sdol/config.hpp"
#include "sdol/output.hpp"

using namespace sdol;

namespace {

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("an empty file gives the defaults") {
  const RunConfig cfg = RunConfig::parse("");
  CHECK(cfg == RunConfig{});
  CHECK(cfg.intensity_W_cm2 == 70);
  CHECK(cfg.seed == 0);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("configuration round-trips through its text form") {
  RunConfig cfg;
  cfg.intensity_W_cm2 = 35.25;
  cfg.wavelength_nm = 795.1234567890123;
  cfg.points = 64;
  cfg.field_model = "hexagonal";
  cfg.zetas = {0, 1};
  cfg.b_list_mG = {0.1, 40, 100};
  cfg.interactions = false;
  cfg.dtau = 1.0 / 3.0;
  cfg.seed = 18446744073709551615ull;
  cfg.output_dir = "some/dir";
  const RunConfig back = RunConfig::parse(cfg.serialize());
  CHECK(back == cfg);
  CHECK(back.serialize() == cfg.serialize());
  CHECK(back.hash() == cfg.hash());
}

TEST_CASE("parser accepts comments and whitespace") {
  const auto cfg = RunConfig::parse(
      "# leading comment\n"
      "[laser]\n"
      "  intensity_W_cm2 =  35   ; trailing comment\n"
      "\n"
      "[field]\n"
      "b_list_mG = 10, 20,30\n");
  CHECK(cfg.intensity_W_cm2 == 35);
  CHECK(cfg.b_values() == std::vector<double>{10, 20, 30});
}

TEST_CASE("parser rejects bad input") {
  CHECK_THROWS_AS(RunConfig::parse("[laser]\npower = 3\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("intensity_W_cm2 = 3\n"), ConfigError);  // no section
  CHECK_THROWS_AS(RunConfig::parse("[laser]\nintensity_W_cm2 = 7x\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[laser\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[system]\ninteractions = maybe\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/sdol.cfg"), ConfigError);
}

TEST_CASE("validation") {
  const auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.intensity_W_cm2 = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.mass_u = -1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.points = 63; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.b_list_mG = {10, 5}; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.b_stop_mG = -10; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.field_model = "round"; }).validate(), std::exception);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.threads = 0; }).validate(), ConfigError);
}

TEST_CASE("field range expands inclusively") {
  RunConfig cfg;
  const auto b = cfg.b_values();
  REQUIRE(b.size() == 11);
  CHECK(b.front() == 0);
  CHECK(b.back() == doctest::Approx(100));
}

TEST_CASE("hash tracks every setting") {
  const RunConfig a;
  RunConfig b;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.seed = 1;
  CHECK(a.hash() != b.hash());
  b = a;
  b.intensity_W_cm2 = 70.000001;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("environment overrides output directory and threads only") {
  setenv("SDOL_OUTPUT_DIR", "/tmp/elsewhere", 1);
  setenv("SDOL_THREADS", "3", 1);
  RunConfig cfg;
  cfg.apply_environment();
  CHECK(cfg.output_dir == "/tmp/elsewhere");
  CHECK(cfg.threads == 3);
  CHECK(cfg.intensity_W_cm2 == 70);
  unsetenv("SDOL_OUTPUT_DIR");
  unsetenv("SDOL_THREADS");
}

TEST_CASE("headers carry the version, hash and intensity") {
  const RunConfig cfg;
  const std::string h = file_header("levels", cfg, {{"extra_key", "42"}});
  CHECK(h.rfind(std::string("# sdol ") + tool_version + " levels\n", 0) == 0);
  CHECK(h.find("# config_hash " + cfg.hash()) != std::string::npos);
  CHECK(h.find("# intensity_W_cm2 70\n") != std::string::npos);
  CHECK(h.find("# extra_key 42\n") != std::string::npos);
}

TEST_CASE("field dump has five columns and scales with intensity") {
  RunConfig cfg;
  cfg.points = 8;
  const auto dump = [&](double intensity) {
    RunConfig c = cfg;
    c.intensity_W_cm2 = intensity;
    return data_lines(format_field_dump(render_field_maps(c.grid(), c.light_shift(), c.model()), c));
  };
  const auto single = dump(70);
  const auto twice = dump(140);
  REQUIRE(single.size() == 64);
  REQUIRE(twice.size() == 64);
  for (std::size_t k = 0; k < single.size(); ++k) {
    std::istringstream a(single[k]), b(twice[k]);
    std::vector<double> va, vb;
    for (double v; a >> v;) va.push_back(v);
    for (double v; b >> v;) vb.push_back(v);
    REQUIRE(va.size() == 5);  // x y V Bx By: no z component
    CHECK(va[0] == vb[0]);
    CHECK(va[1] == vb[1]);
    for (int c = 2; c < 5; ++c) CHECK(vb[c] == doctest::Approx(2 * va[c]).epsilon(1e-12));
  }
}
