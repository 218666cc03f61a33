#include <cmath>

#include "popctl/error.hpp"
#include "popctl/scenarios.hpp"
#include "util/io.hpp"

namespace popctl {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace {

template <class T>
T param(const json& p, const char* key, T def) {
  if (!p.is_object() || !p.contains(key)) return def;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("audit parameter \"") + key + "\" has the wrong type");
  }
}

ojson num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ojson report_block(const InequalityReport& r) {
  ojson j;
  j["empirical_constant"] = num(r.empirical_constant);
  j["counted"] = r.counted();
  j["unstable"] = r.unstable;
  j["violation"] = r.violation;
  if (r.bound) {
    j["bound"] = *r.bound;
    j["bound_holds"] = r.bound_holds;
  }
  return j;
}

void save_report(const InequalityReport& r, const fs::path& out, const std::string& stem) {
  r.write_csv(out / (stem + ".csv"));
  r.write_json(out / (stem + ".json"));
}

std::uint64_t stream_seed(const Scenario& sc, std::uint64_t salt) {
  return sc.seed * 0x9E3779B97F4A7C15ULL + salt;
}

}  // namespace

ojson stage_validate(const Scenario& sc, const fs::path& out) {
  const auto& s = sc.spec;
  const ValidationReport rep =
      validate_hypotheses(s.k, s.rates, s.grid.T, s.grid.A, s.omega, sc.delta);
  ojson j;
  j["all_pass"] = rep.all_pass();
  auto& checks = j["checks"] = ojson::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  try {
    const Degeneracy d = classify_degeneracy(s.k);
    j["degeneracy"] = {{"at0", to_string(d.at0)}, {"at1", to_string(d.at1)}, {"M1", d.M1},
                       {"M2", d.M2}};
  } catch (const ValidationError& e) {
    j["degeneracy"] = {{"error", e.what()}};
  }
  std::FILE* fp = io::open_out(out / "validation.json");
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), fp);
  std::fclose(fp);
  if (!rep.all_pass()) throw ValidationError("hypothesis validation failed:\n" + rep.summary());
  return j;
}

ojson stage_simulate(const Scenario& sc, const fs::path& out) {
  const Trajectory tr = solve_forward(sc.spec);
  write_csv(out / "state.csv", tr.state, tr.grid);
  write_binary(out / "state.bin", tr.state);
  write_energy_csv(out / "energy.csv", tr);
  const EnergyAudit e = energy_audit(tr, sc.spec);
  ojson j;
  j["sup_norm"] = num(e.sup_norm);
  j["flux_integral"] = num(e.flux_integral);
  j["lhs"] = num(e.lhs);
  j["data"] = num(e.data);
  j["C"] = num(e.C);
  j["rhs_bound"] = num(e.rhs_bound);
  j["pass"] = e.pass;
  j["nonincreasing"] = e.nonincreasing;
  return j;
}

ojson stage_adjoint(const Scenario& sc, const fs::path& out) {
  const Field2 vT = random_final_data(sc.spec.grid, sc.seed, sc.y0_modes, 2);
  const AdjointSolution adj = solve_adjoint(sc.spec, vT);
  write_csv(out / "adjoint.csv", adj.v.state, adj.v.grid);
  write_energy_csv(out / "adjoint_energy.csv", adj.v);
  ojson j;
  j["norm_T"] = num(std::sqrt(adj.v.energy_log.back().supnorm));
  j["norm_0"] = num(std::sqrt(adj.v.energy_log.front().supnorm));
  return j;
}

ojson stage_hardy(const Scenario& sc, const fs::path& out, const json& params) {
  const auto thetas =
      param<std::vector<double>>(params, "thetas", {0.25, 0.5, 0.75, 1.25, 1.5, 1.75});
  const int count = param<int>(params, "samples", 100);
  ojson j = ojson::array();
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const double th = thetas[t];
    if (th == 1.0 || th < 0.0 || th >= 2.0)
      throw ValidationError("hardy: theta must lie in [0, 2) and differ from 1");
    const HardyCase c = th < 1.0 ? HardyCase::HP1p : HardyCase::HP2p;
    const auto k = DegenerateCoefficient::power_law(0.0, th);
    const auto fam = random_hardy_family(c, th, count, stream_seed(sc, 10 + t));
    InequalityReport r = hardy_ratio(k, th, c, fam);
    r.seed = sc.seed;
    save_report(r, out, "hardy_theta_" + io::num(th));
    ojson b = report_block(r);
    b["theta"] = th;
    b["case"] = th < 1.0 ? "HP1'" : "HP2'";
    j.push_back(b);
  }
  return j;
}

ojson stage_carleman(const Scenario& sc, const fs::path& out, const json& params) {
  CarlemanOptions opt;
  opt.sweep = param<std::vector<double>>(params, "s_sweep", kDefaultSweep);
  opt.kappa = param<double>(params, "kappa", 1.0);
  const int N = param<int>(params, "N", 16);
  const int count = param<int>(params, "samples", 3);
  const double T = param<double>(params, "T", 2.0);
  const Grid g = Grid::cube(T, N);
  const auto& k = sc.spec.k;
  const auto samples = manufactured_family(k, sc.spec.rates, g, count, stream_seed(sc, 20));
  ojson j;
  auto attempt = [&](const char* key, auto&& fn) {
    try {
      InequalityReport r = fn();
      r.seed = sc.seed;
      save_report(r, out, std::string("carleman_") + key);
      j[key] = report_block(r);
    } catch (const ValidationError& e) {
      j[key] = {{"skipped", e.what()}};
    }
  };
  if (k.zero_at0()) attempt("deg0", [&] { return carleman_audit_deg0(samples, k, opt); });
  if (k.zero_at1()) attempt("deg1", [&] { return carleman_audit_deg1(samples, k, opt); });
  attempt("local", [&] { return carleman_local_audit(samples, k, sc.spec.omega, opt); });
  attempt("nondeg", [&] {
    Grid sub = g;
    sub.x_lo = sc.spec.omega.first;
    sub.x_hi = sc.spec.omega.second;
    const auto zs = manufactured_family(k, sc.spec.rates, sub, count, stream_seed(sc, 21));
    return carleman_audit_nondeg(zs, k, opt);
  });
  return j;
}

ojson stage_caccioppoli(const Scenario& sc, const fs::path& out, const json& params) {
  const auto [a, r] = sc.spec.omega;
  const double w = r - a;
  const double s = param<double>(params, "s", 1.0);
  const double lo = param<double>(params, "omega_prime_lo", a + 0.25 * w);
  const double hi = param<double>(params, "omega_prime_hi", r - 0.25 * w);
  const Grid g = Grid::cube(param<double>(params, "T", 2.0), param<int>(params, "N", 16));
  const auto samples = manufactured_family(sc.spec.k, sc.spec.rates, g,
                                           param<int>(params, "samples", 3), stream_seed(sc, 30));
  InequalityReport rep = caccioppoli_audit(samples, sc.spec.k, {lo, hi}, sc.spec.omega, s);
  rep.seed = sc.seed;
  save_report(rep, out, "caccioppoli");
  return report_block(rep);
}

ojson stage_observability(const Scenario& sc, const fs::path& out, const json& params) {
  const int count = param<int>(params, "samples", 20);
  std::vector<Field2> ens;
  for (int m = 0; m < count; ++m)
    ens.push_back(random_final_data(sc.spec.grid, sc.seed, sc.y0_modes, 100 + m));
  InequalityReport rep = observability_ratio(sc.spec, ens, sc.delta);
  rep.seed = sc.seed;
  save_report(rep, out, "observability");
  return report_block(rep);
}

namespace {

ojson control_block(const ControlSolution& s) {
  ojson j;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  j["final_residual"] = num(s.final_residual);
  j["certificate"] = num(s.certificate);
  j["control_norm"] = num(s.control_norm);
  j["bound_ratio"] = num(s.bound_ratio);
  return j;
}

void save_control(const ControlSolution& s, const HUMConfig& cfg, const fs::path& out,
                  const std::string& stem) {
  write_control_csv(out / (stem + "_control.csv"), s);
  write_cg_log(out / (stem + "_cg_log.csv"), s.cg_log);
  write_control_summary(out / (stem + "_summary.json"), s, cfg);
}

}  // namespace

ojson stage_hum(const Scenario& sc, const fs::path& out) {
  const ControlSolution s = hum_control(sc.spec, sc.hum);
  save_control(s, sc.hum, out, "hum");
  return control_block(s);
}

ojson stage_delay(const Scenario& sc, const fs::path& out) {
  const ControlSolution s = compose_delay_control(sc.spec, sc.hum);
  save_control(s, sc.hum, out, "delay");
  ojson j = control_block(s);
  j["t_switch"] = s.t_switch;
  j["intermediate_norm"] = num(s.intermediate_norm);
  j["intermediate_bound"] = num(s.intermediate_bound);
  j["warnings"] = s.warnings;
  return j;
}

ojson stage_glue(const Scenario& sc, const fs::path& out, const json& params) {
  const auto [a, r] = sc.spec.omega;
  const double ab = param<double>(params, "alpha_bar", 0.5 * a);
  const double bb = param<double>(params, "beta_bar", 0.5 * (1.0 + r));
  const ControlSolution s = glue_two_sided(sc.spec, sc.hum, ab, bb);
  save_control(s, sc.hum, out, "glue");
  ojson j = control_block(s);
  j["residual_max"] = num(s.residual_max);
  j["glue_tolerance"] = num(s.glue_tolerance);
  j["sub_certificates"] = s.sub_certificates;
  return j;
}

ojson stage_r0(const Scenario& sc, const fs::path& out) {
  const R0Result r = net_reproduction_rate(sc.spec.rates, sc.spec.grid.A);
  ojson j;
  j["R0"] = num(r.value);
  j["growth"] = to_string(r.growth);
  if (sc.r0_target) j["reference_label"] = *sc.r0_target;
  std::FILE* fp = io::open_out(out / "r0.json");
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), fp);
  std::fclose(fp);
  return j;
}

ojson run_scenario(const Scenario& sc, const fs::path& out) {
  ojson summary;
  summary["name"] = sc.name;
  summary["seed"] = sc.seed;
  summary["validate"] = stage_validate(sc, out);
  summary["simulate"] = stage_simulate(sc, out);
  auto& audits = summary["audits"] = ojson::object();
  for (const auto& a : sc.audits) {
    if (a.kind == "energy") continue;  // part of simulate
    if (a.kind == "hardy") audits["hardy"] = stage_hardy(sc, out, a.params);
    else if (a.kind == "carleman") audits["carleman"] = stage_carleman(sc, out, a.params);
    else if (a.kind == "caccioppoli") audits["caccioppoli"] = stage_caccioppoli(sc, out, a.params);
    else if (a.kind == "observability") audits["observability"] = stage_observability(sc, out, a.params);
    else if (a.kind == "adjoint") audits["adjoint"] = stage_adjoint(sc, out);
    else if (a.kind == "r0") audits["r0"] = stage_r0(sc, out);
    else if (a.kind == "hum") audits["hum"] = stage_hum(sc, out);
    else if (a.kind == "delay") audits["delay"] = stage_delay(sc, out);
    else if (a.kind == "glue") audits["glue"] = stage_glue(sc, out, a.params);
  }
  if (sc.has_hum) summary["control"] = stage_delay(sc, out);
  finish_bundle(out, summary);
  return summary;
}

}  // namespace popctl
