#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>

#include "popctl/error.hpp"
#include "popctl/scenarios.hpp"

namespace fs = std::filesystem;
using popctl::Scenario;
using ojson = nlohmann::ordered_json;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string out = "out";
  std::vector<double> s_sweep;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  bool has_eps = false, has_seed = false;
};

Scenario load(const Common& c, CLI::App* sub) {
  if (c.config.empty() == c.preset.empty())
    throw popctl::ValidationError("give exactly one of --config or --preset");
  Scenario sc = c.config.empty() ? popctl::preset(c.preset) : popctl::load_scenario(c.config);
  popctl::Overrides ov;
  if (!c.s_sweep.empty()) ov.s_sweep = c.s_sweep;
  if (sub->count("--epsilon")) ov.epsilon = c.epsilon;
  if (sub->count("--seed")) ov.seed = c.seed;
  popctl::apply_overrides(sc, ov);
  return sc;
}

nlohmann::json audit_params(const Scenario& sc, const std::string& kind) {
  for (const auto& a : sc.audits)
    if (a.kind == kind) return a.params;
  return nlohmann::json::object();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate age-structured population model: simulation, audits and null controls"};
  app.require_subcommand(1);
  Common c;

  using Stage = std::function<ojson(const Scenario&, const fs::path&)>;
  std::vector<std::pair<CLI::App*, Stage>> stages;
  auto add = [&](const char* name, const char* help, Stage fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", c.config, "JSON configuration file");
    sub->add_option("--preset", c.preset, "builtin scenario instead of --config");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--s-sweep", c.s_sweep, "Carleman parameters s")->delimiter(',');
    sub->add_option("--epsilon", c.epsilon, "HUM penalty");
    sub->add_option("--seed", c.seed, "random seed");
    stages.emplace_back(sub, std::move(fn));
  };

  add("validate", "check the hypotheses of a scenario", popctl::stage_validate);
  add("simulate", "forward solve with the energy audit", popctl::stage_simulate);
  add("adjoint", "adjoint solve from seeded final data", popctl::stage_adjoint);
  add("hardy-audit", "Hardy-Poincare ratios", [](const Scenario& sc, const fs::path& o) {
    return popctl::stage_hardy(sc, o, audit_params(sc, "hardy"));
  });
  add("carleman-audit", "Carleman empirical constants", [](const Scenario& sc, const fs::path& o) {
    return popctl::stage_carleman(sc, o, audit_params(sc, "carleman"));
  });
  add("caccioppoli-audit", "Caccioppoli empirical constant",
      [](const Scenario& sc, const fs::path& o) {
        return popctl::stage_caccioppoli(sc, o, audit_params(sc, "caccioppoli"));
      });
  add("observability", "observability ratio over a random ensemble",
      [](const Scenario& sc, const fs::path& o) {
        return popctl::stage_observability(sc, o, audit_params(sc, "observability"));
      });
  add("hum", "penalized HUM control on [0, T]", popctl::stage_hum);
  add("delay", "free phase then HUM on [T - a_bar, T]", popctl::stage_delay);
  add("glue", "two-sided gluing of one-sided controls", [](const Scenario& sc, const fs::path& o) {
    return popctl::stage_glue(sc, o, audit_params(sc, "glue"));
  });
  add("r0", "net reproduction rate", popctl::stage_r0);
  add("run", "validate, simulate, audits and control", nullptr);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [sub, fn] : stages) {
      if (!sub->parsed()) continue;
      const Scenario sc = load(c, sub);
      const fs::path out(c.out);
      fs::create_directories(out);
      if (!fn) {
        popctl::run_scenario(sc, out);
      } else {
        ojson summary;
        summary["name"] = sc.name;
        summary["seed"] = sc.seed;
        summary[sub->get_name()] = fn(sc, out);
        popctl::finish_bundle(out, summary);
        std::cout << summary.dump(2) << "\n";
      }
      std::cerr << "wrote " << out.string() << "\n";
    }
  } catch (const popctl::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const popctl::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const popctl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
