#include <cmath>
#include <json.hpp>

#include "popctl/control.hpp"
#include "popctl/error.hpp"
#include "util/io.hpp"

namespace popctl {

ControlBoundTable control_bound_report(const std::vector<ControlSolution>& runs) {
  ControlBoundTable t;
  bool first = true;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& s = runs[r];
    if (s.y0_norm == 0.0) continue;
    t.rows.push_back({static_cast<int>(r), s.y0_norm, s.control_norm, s.bound_ratio});
    if (!std::isfinite(s.bound_ratio)) t.finite = false;
    if (first) {
      t.max_ratio = t.min_ratio = s.bound_ratio;
      first = false;
    } else {
      t.max_ratio = std::max(t.max_ratio, s.bound_ratio);
      t.min_ratio = std::min(t.min_ratio, s.bound_ratio);
    }
  }
  return t;
}

void write_control_bound_csv(const std::filesystem::path& path, const ControlBoundTable& t) {
  std::FILE* fp = io::open_out(path);
  std::fputs("run,y0_norm,control_norm,bound_ratio\n", fp);
  for (const auto& r : t.rows)
    std::fprintf(fp, "%d,%s,%s,%s\n", r.run, io::num(r.y0_norm).c_str(),
                 io::num(r.control_norm).c_str(), io::num(r.bound_ratio).c_str());
  std::fclose(fp);
}

void write_control_csv(const std::filesystem::path& path, const ControlSolution& s) {
  write_csv(path, s.f, s.y.grid);
}

void write_control_summary(const std::filesystem::path& path, const ControlSolution& s,
                           const HUMConfig& cfg) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["epsilon"] = cfg.epsilon;
  j["cg_tol"] = cfg.cg_tol;
  j["cg_max_iter"] = cfg.cg_max_iter;
  j["delta"] = cfg.delta;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  j["final_residual"] = num(s.final_residual);
  j["certificate"] = num(s.certificate);
  j["J_star"] = num(s.J_star);
  j["control_norm"] = num(s.control_norm);
  j["y0_norm"] = num(s.y0_norm);
  j["bound_ratio"] = num(s.bound_ratio);
  j["t_switch"] = s.t_switch;
  j["n_switch"] = s.n_switch;
  j["intermediate_norm"] = num(s.intermediate_norm);
  j["intermediate_bound"] = num(s.intermediate_bound);
  if (!s.sub_certificates.empty()) {
    j["sub_certificates"] = s.sub_certificates;
    j["sub_control_norms"] = s.sub_control_norms;
    j["residual_max"] = num(s.residual_max);
    j["consistency_error"] = num(s.consistency_error);
    j["glue_tolerance"] = num(s.glue_tolerance);
  }
  j["warnings"] = s.warnings;
  std::FILE* fp = io::open_out(path);
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), fp);
  std::fclose(fp);
}

}  // namespace popctl
