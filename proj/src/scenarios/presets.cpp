#include "popctl/error.hpp"
#include "popctl/scenarios.hpp"

namespace popctl {

namespace {

using nlohmann::json;

json base_config(const std::string& name, double beta_level, double mu_level) {
  return json{
      {"name", name},
      {"model",
       {{"T", 1.0},
        {"A", 2.0},
        {"a_bar", 0.5},
        {"delta", 1.25},
        {"k", {{"form", "power_law"}, {"alpha0", 0.5}, {"alpha1", 0.5}}},
        {"beta", {{"family", "window"}, {"value", beta_level}, {"lo", 0.5}, {"hi", 2.0}}},
        {"mu", {{"family", "constant"}, {"value", mu_level}}},
        {"omega", {0.3, 0.7}}}},
      {"grid", {{"Nt", 24}, {"Na", 48}, {"Nx", 24}}},
      {"hum", {{"epsilon", 1e-6}, {"cg_tol", 1e-8}, {"cg_max_iter", 300}}},
      {"audits", json::array({"energy", "r0"})},
      {"seed", 1}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"default_degenerate", "tirathaba_28C", "tirathaba_20C", "nilaparvata"};
}

// The insect presets differ only in their reference R0 label; the rates are
// the same illustrative window fertility, not fitted to any data.
json preset_config(const std::string& name) {
  if (name == "default_degenerate") return base_config(name, 1.0, 0.2);
  json j;
  if (name == "tirathaba_28C") {
    j = base_config(name, 1.0, 0.2);
    j["r0_target"] = 10.40;
  } else if (name == "tirathaba_20C") {
    j = base_config(name, 1.0, 0.2);
    j["r0_target"] = 4.13;
  } else if (name == "nilaparvata") {
    j = base_config(name, 1.0, 0.2);
    j["r0_target"] = 10.0;
  } else {
    throw ValidationError("unknown preset \"" + name + "\"");
  }
  return j;
}

Scenario preset(const std::string& name) { return parse_scenario(preset_config(name)); }

}  // namespace popctl
