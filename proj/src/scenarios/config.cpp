#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "popctl/error.hpp"
#include "popctl/scenarios.hpp"

namespace popctl {

namespace {

using nlohmann::json;

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

const json& req(const json& j, const std::string& where, const std::string& key) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError("config: missing key \"" + join(where, key) + "\"");
  return j.at(key);
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError("config: \"" + path + "\" must be a number");
  return j.get<double>();
}

double req_num(const json& j, const std::string& where, const std::string& key) {
  return num(req(j, where, key), join(where, key));
}

double opt_num(const json& j, const std::string& where, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  return num(j.at(key), join(where, key));
}

int req_int(const json& j, const std::string& where, const std::string& key) {
  const json& v = req(j, where, key);
  if (!v.is_number_integer())
    throw ValidationError("config: \"" + join(where, key) + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> num_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError("config: \"" + path + "\" must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

DegenerateCoefficient parse_k(const json& j, const std::string& where) {
  const json& f = req(j, where, "form");
  if (!f.is_string()) throw ValidationError("config: \"" + join(where, "form") + "\" must be a string");
  const std::string form = f.get<std::string>();
  if (form == "power_law" || form == "power")
    return DegenerateCoefficient::power_law(opt_num(j, where, "alpha0", 0.0),
                                            opt_num(j, where, "alpha1", 0.0));
  if (form == "table" || form == "tabulated") {
    auto samples = num_array(req(j, where, "table"), join(where, "table"));
    std::vector<double> slopes;
    if (j.contains("slopes")) slopes = num_array(j.at("slopes"), join(where, "slopes"));
    return DegenerateCoefficient::tabulated(std::move(samples), std::move(slopes));
  }
  throw ValidationError("config: \"" + join(where, "form") + "\" must be power_law or table");
}

}  // namespace

RateFunction parse_rate(const json& j, const std::string& where) {
  if (j.is_number()) return RateFunction::constant(j.get<double>());
  const json& f = req(j, where, "family");
  if (!f.is_string())
    throw ValidationError("config: \"" + join(where, "family") + "\" must be a string");
  const std::string fam = f.get<std::string>();
  RateFunction r;
  if (fam == "constant") {
    r = RateFunction::constant(req_num(j, where, "value"));
  } else if (fam == "window") {
    r = RateFunction::window(req_num(j, where, "value"), req_num(j, where, "lo"),
                             req_num(j, where, "hi"));
  } else if (fam == "gaussian_bump" || fam == "gaussian-bump") {
    r = RateFunction::gaussian_bump(
        req_num(j, where, "peak"), req_num(j, where, "center"), req_num(j, where, "width"),
        opt_num(j, where, "lo", -std::numeric_limits<double>::infinity()));
  } else if (fam == "table") {
    r = RateFunction::tabulated(num_array(req(j, where, "ages"), join(where, "ages")),
                                num_array(req(j, where, "values"), join(where, "values")));
  } else {
    throw ValidationError("config: \"" + join(where, "family") + "\" = \"" + fam +
                          "\" is not one of constant, window, gaussian_bump, table");
  }
  r.spatial_amplitude = opt_num(j, where, "spatial_amplitude", 0.0);
  return r;
}

Scenario parse_scenario(const json& config) {
  if (!config.is_object()) throw ValidationError("config: top level must be an object");
  Scenario sc;
  sc.source = config;
  if (config.contains("name")) {
    if (!config["name"].is_string()) throw ValidationError("config: \"name\" must be a string");
    sc.name = config["name"].get<std::string>();
  }
  const json& model = req(config, "", "model");
  const json& grid = req(config, "", "grid");

  Grid g;
  g.T = req_num(model, "model", "T");
  g.A = req_num(model, "model", "A");
  g.Nt = req_int(grid, "grid", "Nt");
  g.Na = req_int(grid, "grid", "Na");
  g.Nx = req_int(grid, "grid", "Nx");
  g.validate();

  sc.spec.grid = g;
  sc.spec.k = parse_k(req(model, "model", "k"), "model.k");
  sc.spec.rates.beta = parse_rate(req(model, "model", "beta"), "model.beta");
  sc.spec.rates.mu = parse_rate(req(model, "model", "mu"), "model.mu");
  sc.spec.rates.a_bar = req_num(model, "model", "a_bar");
  sc.delta = req_num(model, "model", "delta");
  const auto om = num_array(req(model, "model", "omega"), "model.omega");
  if (om.size() != 2) throw ValidationError("config: \"model.omega\" must be [alpha, rho]");
  sc.spec.omega = {om[0], om[1]};

  if (config.contains("seed")) {
    const json& s = config["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ValidationError("config: \"seed\" must be a nonnegative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  if (model.contains("y0_modes")) sc.y0_modes = req_int(model, "model", "y0_modes");
  if (config.contains("r0_target")) sc.r0_target = num(config["r0_target"], "r0_target");

  sc.hum.delta = sc.delta;
  if (config.contains("hum")) {
    const json& h = config["hum"];
    sc.has_hum = true;
    sc.hum.epsilon = req_num(h, "hum", "epsilon");
    sc.hum.cg_tol = req_num(h, "hum", "cg_tol");
    sc.hum.cg_max_iter = req_int(h, "hum", "cg_max_iter");
  }
  if (config.contains("audits")) {
    const json& a = config["audits"];
    if (!a.is_array()) throw ValidationError("config: \"audits\" must be an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      AuditRequest r;
      if (a[i].is_string()) {
        r.kind = a[i].get<std::string>();
      } else {
        const std::string where = "audits[" + std::to_string(i) + "]";
        const json& kind = req(a[i], where, "kind");
        if (!kind.is_string())
          throw ValidationError("config: \"" + where + ".kind\" must be a string");
        r.kind = kind.get<std::string>();
        r.params = a[i];
      }
      static const std::vector<std::string> kinds{"energy",        "hardy", "carleman",
                                                  "caccioppoli",   "observability",
                                                  "hum",           "delay", "glue",
                                                  "r0",            "adjoint"};
      if (std::find(kinds.begin(), kinds.end(), r.kind) == kinds.end())
        throw ValidationError("config: unknown audit kind \"" + r.kind + "\"");
      sc.audits.push_back(std::move(r));
    }
  }

  sc.spec.y0 = scenario_y0(sc);
  validate_spec(sc.spec);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

void apply_overrides(Scenario& sc, const Overrides& ov) {
  if (ov.epsilon) {
    if (!(*ov.epsilon > 0.0)) throw ValidationError("--epsilon must be positive");
    sc.hum.epsilon = *ov.epsilon;
  }
  if (ov.seed) {
    sc.seed = *ov.seed;
    sc.spec.y0 = scenario_y0(sc);
  }
  if (ov.s_sweep) {
    for (double s : *ov.s_sweep)
      if (!(s > 0.0)) throw ValidationError("--s-sweep values must be positive");
    bool found = false;
    for (auto& a : sc.audits)
      if (a.kind == "carleman") {
        a.params["s_sweep"] = *ov.s_sweep;
        found = true;
      }
    if (!found) sc.audits.push_back({"carleman", {{"kind", "carleman"}, {"s_sweep", *ov.s_sweep}}});
  }
}

Field2 scenario_y0(const Scenario& sc) {
  return random_final_data(sc.spec.grid, sc.seed, sc.y0_modes, 1);
}

}  // namespace popctl
