#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "popctl/error.hpp"
#include "popctl/scenarios.hpp"

using namespace popctl;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("popctl_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(POPCTL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("missing keys are named by path") {
  json c = preset_config("default_degenerate");
  c["grid"].erase("Nx");
  try {
    parse_scenario(c);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("grid.Nx") != std::string::npos);
  }

  json d = preset_config("default_degenerate");
  d["model"]["k"]["alpha0"] = "half";
  CHECK_THROWS_AS(parse_scenario(d), ValidationError);
  json e = preset_config("default_degenerate");
  e["audits"] = json::array({"bogus"});
  CHECK_THROWS_AS(parse_scenario(e), ValidationError);
}

TEST_CASE("presets round trip through the config parser") {
  for (const auto& name : preset_names()) {
    Scenario a = preset(name);
    Scenario b = parse_scenario(preset_config(name));
    CHECK(a.name == name);
    CHECK(b.name == name);
    CHECK(a.spec.grid.Nx == b.spec.grid.Nx);
    CHECK(a.delta == b.delta);
  }
  CHECK(preset("tirathaba_28C").r0_target.value() == doctest::Approx(10.40));
  CHECK(preset("tirathaba_20C").r0_target.value() == doctest::Approx(4.13));
  CHECK_THROWS_AS(preset("no_such_preset"), ValidationError);
}

TEST_CASE("rate parsing") {
  auto c = parse_rate(json(0.3), "mu");
  CHECK(c(0, 1.0, 0.5) == doctest::Approx(0.3));
  auto g = parse_rate(json{{"family", "gaussian-bump"}, {"peak", 2.0}, {"center", 1.0},
                           {"width", 0.5}},
                      "beta");
  CHECK(g(0, 1.0, 0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(parse_rate(json{{"family", "wavy"}}, "beta"), ValidationError);
}

TEST_CASE("net reproduction rate") {
  VitalRates r;
  r.beta = RateFunction::constant(0.0);
  r.mu = RateFunction::constant(0.0);
  CHECK(net_reproduction_rate(r, 2.0).value == 0.0);
  CHECK(net_reproduction_rate(r, 2.0).growth == GrowthClass::decaying);

  r.beta = RateFunction::window(1.5, 0.5, 2.0);
  auto w = net_reproduction_rate(r, 2.0);
  CHECK(w.value == doctest::Approx(1.5 * 1.5).epsilon(1e-6));
  CHECK(w.growth == GrowthClass::growing);

  r.beta = RateFunction::window(1.0, 1.0, 2.0);
  CHECK(net_reproduction_rate(r, 2.0).growth == GrowthClass::steady);

  // exp(-mu a) weighting: int_0^2 e^{-a} = 1 - e^{-2}
  r.beta = RateFunction::constant(1.0);
  r.mu = RateFunction::constant(1.0);
  CHECK(net_reproduction_rate(r, 2.0).value == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-8));

  double prev = 0.0;
  for (double b : {0.5, 1.0, 2.0}) {
    r.beta = RateFunction::window(b, 0.5, 2.0);
    double v = net_reproduction_rate(r, 2.0).value;
    CHECK(v > prev);
    prev = v;
  }

  r.beta.spatial_amplitude = 0.3;
  CHECK_THROWS_AS(net_reproduction_rate(r, 2.0), ValidationError);
}

TEST_CASE("sha256 and manifest") {
  auto dir = scratch("manifest");
  {
    std::ofstream f(dir / "abc.txt", std::ios::binary);
    f << "abc";
  }
  CHECK(sha256_file(dir / "abc.txt") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::create_directories(dir / "sub");
  { std::ofstream f(dir / "sub" / "b.txt"); f << "x"; }
  write_manifest(dir);
  json m = json::parse(std::ifstream(dir / "manifest.json"));
  REQUIRE(m["files"].size() == 2);
  CHECK(m["files"][0]["path"] == "abc.txt");
  CHECK(m["files"][0]["bytes"] == 3);
  CHECK(m["files"][1]["path"] == "sub/b.txt");
  fs::remove_all(dir);
}

TEST_CASE("overrides") {
  Scenario sc = preset("default_degenerate");
  Overrides ov;
  ov.epsilon = 1e-4;
  ov.seed = 9;
  ov.s_sweep = std::vector<double>{1, 2};
  Field2 before = scenario_y0(sc);
  apply_overrides(sc, ov);
  CHECK(sc.hum.epsilon == 1e-4);
  CHECK(sc.seed == 9);
  CHECK(scenario_y0(sc).values != before.values);
  bool has_carleman = false;
  for (const auto& a : sc.audits)
    if (a.kind == "carleman") has_carleman = a.params.contains("s_sweep");
  CHECK(has_carleman);
}

TEST_CASE("scenario bundle is deterministic") {
  Scenario sc = preset("default_degenerate");
  auto d1 = scratch("bundle1"), d2 = scratch("bundle2");
  run_scenario(sc, d1);
  run_scenario(sc, d2);
  std::ifstream a(d1 / "manifest.json"), b(d2 / "manifest.json");
  std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(!sa.empty());
  CHECK(sa == sb);
  CHECK(fs::exists(d1 / "summary.json"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("cli exit codes") {
  auto dir = scratch("cli");
  CHECK(run_cli("validate --preset default_degenerate --out " + (dir / "ok").string()) == 0);
  CHECK(run_cli("r0 --config " + std::string(POPCTL_CONFIG_DIR) +
                "/default_degenerate.json --out " + (dir / "r0").string()) == 0);
  CHECK(fs::exists(dir / "r0" / "manifest.json"));

  json c = preset_config("default_degenerate");
  c["grid"].erase("Nx");
  std::ofstream(dir / "bad.json") << c.dump();
  CHECK(run_cli("validate --config " + (dir / "bad.json").string() + " --out " +
                (dir / "bad").string()) == 2);

  json h = preset_config("default_degenerate");
  h["model"]["delta"] = 1.0;
  std::ofstream(dir / "hyp.json") << h.dump();
  CHECK(run_cli("validate --config " + (dir / "hyp.json").string() + " --out " +
                (dir / "hyp").string()) == 2);
  fs::remove_all(dir);
}
