#include <cmath>

#include "popctl/control.hpp"
#include "popctl/error.hpp"
#include "popctl/kernels.hpp"
#include "util/io.hpp"

namespace popctl {

ControlSolution compose_delay_control(const ProblemSpec& spec, const HUMConfig& cfg) {
  validate_spec(spec);
  const Grid& g = spec.grid;
  const double dt = g.dt();
  const double a_bar = spec.rates.a_bar;
  if (!(a_bar > 0.0 && a_bar <= g.T - g.t0 + 1e-12 * g.T))
    throw ValidationError("delay: a_bar must lie in (0, T - t0]");
  const int steps_ctrl = static_cast<int>(std::lround(a_bar / dt));
  if (steps_ctrl < 1) throw ValidationError("delay: a_bar is shorter than one time step");
  std::vector<std::string> warnings;
  const double snapped = steps_ctrl * dt;
  if (std::abs(snapped - a_bar) > 1e-12 * g.T)
    warnings.push_back("a_bar = " + io::num(a_bar) + " snapped to " + io::num(snapped));
  const int n_switch = g.Nt - steps_ctrl;

  // Phase 1: free solve on [t0, T_tilde].
  Field3 u_free;
  std::vector<EnergyRecord> log1;
  Field2 y_mid = spec.y0;
  if (n_switch > 0) {
    ProblemSpec s1 = spec;
    s1.grid.Nt = n_switch;
    s1.grid.T = g.t(n_switch);
    Trajectory tr = solve_forward(s1);
    y_mid = tr.state.at(n_switch);
    u_free = std::move(tr.state);
    log1 = std::move(tr.energy_log);
  }

  // Phase 2: penalized HUM on [T_tilde, T].
  ProblemSpec s2 = spec;
  s2.grid.t0 = g.t(n_switch);
  s2.grid.Nt = steps_ctrl;
  s2.y0 = y_mid;
  ControlSolution ph = hum_control(s2, cfg);

  ControlSolution out;
  out.f = Field3(g);
  out.y.grid = g;
  out.y.state = Field3(g);
  for (int n = 0; n <= g.Nt; ++n) {
    if (n <= n_switch && n_switch > 0) {
      auto src = u_free.slice(n);
      std::copy(src.begin(), src.end(), out.y.state.slice(n).begin());
    }
    if (n >= n_switch) {
      auto src = ph.y.state.slice(n - n_switch);
      std::copy(src.begin(), src.end(), out.y.state.slice(n).begin());
      if (n > n_switch) {
        auto fs = ph.f.slice(n - n_switch);
        std::copy(fs.begin(), fs.end(), out.f.slice(n).begin());
      }
    }
  }
  out.y.energy_log = log1;
  for (const auto& r : ph.y.energy_log) {
    if (r.step == 0 && n_switch > 0) continue;
    out.y.energy_log.push_back({r.step + n_switch, r.t, r.supnorm, r.flux});
  }

  const double scale = g.da() * g.dx();
  out.final_residual = ph.final_residual;
  out.certificate = ph.certificate;
  out.J_star = ph.J_star;
  out.cg_log = ph.cg_log;
  out.iterations = ph.iterations;
  out.converged = ph.converged;
  out.control_norm = ph.control_norm;
  Field2 y0 = spec.y0;
  out.y0_norm = std::sqrt(scale * kernels::dot(y0.values, y0.values));
  out.bound_ratio = out.y0_norm > 0.0 ? out.control_norm / out.y0_norm : 0.0;
  out.t_switch = g.t(n_switch);
  out.n_switch = n_switch;
  out.intermediate_norm = std::sqrt(scale * kernels::dot(y_mid.values, y_mid.values));
  const double bsup = spec.rates.beta_sup(g);
  out.intermediate_bound =
      std::exp(0.5 * g.A * bsup * bsup * (out.t_switch - g.t0)) * out.y0_norm;
  out.warnings = std::move(warnings);
  return out;
}

}  // namespace popctl
