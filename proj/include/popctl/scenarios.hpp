#pragma once

// Scenario configuration, presets, net reproduction rate, the staged runner
// behind the CLI and the output manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "popctl/control.hpp"
#include "popctl/inequalities.hpp"
#include "popctl/solver.hpp"

namespace popctl {

/// One entry of the config's "audits" list. Either a bare name or an object
/// {"kind": ..., parameters...}; parameters not used by a kind are ignored.
struct AuditRequest {
  std::string kind;  // energy, hardy, carleman, caccioppoli, observability, hum, delay, glue, r0
  nlohmann::json params = nlohmann::json::object();
};

struct Scenario {
  std::string name = "scenario";
  ProblemSpec spec;
  HUMConfig hum;
  bool has_hum = false;
  double delta = 1.25;
  std::vector<AuditRequest> audits;
  std::optional<double> r0_target;
  std::uint64_t seed = 0;
  int y0_modes = 4;
  nlohmann::json source = nlohmann::json::object();  // the parsed config
};

/// Parses the JSON config. Missing or mistyped keys raise ValidationError
/// naming the key path, e.g. "grid.Nx".
Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::filesystem::path& path);

/// Rate function from {"family": ..., ...}; `where` prefixes error paths.
RateFunction parse_rate(const nlohmann::json& j, const std::string& where);

/// Builtin scenarios: default_degenerate, tirathaba_28C, tirathaba_20C, nilaparvata.
std::vector<std::string> preset_names();
Scenario preset(const std::string& name);
/// The preset as a config document (round-trips through parse_scenario).
nlohmann::json preset_config(const std::string& name);

enum class GrowthClass { decaying, steady, growing };
std::string to_string(GrowthClass c);

struct R0Result {
  double value = 0.0;
  GrowthClass growth = GrowthClass::steady;
};

/// int_0^A beta(a) exp(-int_0^a mu) da by the composite trapezoid rule on
/// `cells` cells. Rejects rates that vary in space.
R0Result net_reproduction_rate(const VitalRates& rates, double A, int cells = 200000);

struct Overrides {
  std::optional<std::vector<double>> s_sweep;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
};
void apply_overrides(Scenario& sc, const Overrides& ov);

/// Initial state of a scenario (seeded series data).
Field2 scenario_y0(const Scenario& sc);

// Stages. Each writes its artifacts into `out` and returns a summary block.
nlohmann::ordered_json stage_validate(const Scenario& sc, const std::filesystem::path& out);
nlohmann::ordered_json stage_simulate(const Scenario& sc, const std::filesystem::path& out);
nlohmann::ordered_json stage_adjoint(const Scenario& sc, const std::filesystem::path& out);
nlohmann::ordered_json stage_hardy(const Scenario& sc, const std::filesystem::path& out,
                                   const nlohmann::json& params = {});
nlohmann::ordered_json stage_carleman(const Scenario& sc, const std::filesystem::path& out,
                                      const nlohmann::json& params = {});
nlohmann::ordered_json stage_caccioppoli(const Scenario& sc, const std::filesystem::path& out,
                                         const nlohmann::json& params = {});
nlohmann::ordered_json stage_observability(const Scenario& sc, const std::filesystem::path& out,
                                           const nlohmann::json& params = {});
nlohmann::ordered_json stage_hum(const Scenario& sc, const std::filesystem::path& out);
nlohmann::ordered_json stage_delay(const Scenario& sc, const std::filesystem::path& out);
nlohmann::ordered_json stage_glue(const Scenario& sc, const std::filesystem::path& out,
                                  const nlohmann::json& params = {});
nlohmann::ordered_json stage_r0(const Scenario& sc, const std::filesystem::path& out);

/// validate -> simulate -> requested audits -> control (delay composition when
/// the config has a "hum" block). Writes summary.json and manifest.json.
nlohmann::ordered_json run_scenario(const Scenario& sc, const std::filesystem::path& out);

/// summary.json plus manifest.json for a finished output directory.
void finish_bundle(const std::filesystem::path& out, const nlohmann::ordered_json& summary);

/// manifest.json: every regular file under `dir` (sorted relative paths,
/// manifest itself excluded) with its byte size and SHA-256.
void write_manifest(const std::filesystem::path& dir);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace popctl
