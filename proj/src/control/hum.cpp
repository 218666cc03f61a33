#include <algorithm>
#include <cmath>

#include "popctl/control.hpp"
#include "popctl/error.hpp"
#include "popctl/kernels.hpp"
#include "util/io.hpp"

namespace popctl {

void HUMConfig::validate(const Grid& g) const {
  if (!(epsilon > 0.0)) throw ValidationError("hum.epsilon must be positive");
  if (!(cg_tol > 0.0)) throw ValidationError("hum.cg_tol must be positive");
  if (cg_max_iter < 1) throw ValidationError("hum.cg_max_iter must be at least 1");
  if (stagnation_window < 1) throw ValidationError("hum: stagnation window must be at least 1");
  if (!(delta > g.T && delta < g.A))
    throw ValidationError("hum: delta = " + io::num(delta) + " must lie in (T, A)");
}

std::vector<double> target_mask(const Grid& g, double delta) {
  std::vector<double> m(g.slice_size(), 0.0);
  for (int j = 0; j < g.Na; ++j) {
    if (!(g.a(j) > delta)) continue;
    for (int i = 1; i < g.Nx; ++i) m[static_cast<std::size_t>(j) * (g.Nx + 1) + i] = 1.0;
  }
  return m;
}

double target_norm(const Grid& g, std::span<const double> slice, double delta) {
  const auto m = target_mask(g, delta);
  return std::sqrt(g.da() * g.dx() * kernels::weighted_dot(slice, slice, m));
}

namespace {

double control_l2(const Grid& g, const Field3& f) {
  double acc = 0.0;
  for (int n = 1; n <= g.Nt; ++n) {
    auto s = f.slice(n);
    acc += kernels::dot(s, s);
  }
  return std::sqrt(g.dt() * g.da() * g.dx() * acc);
}

}  // namespace

ControlSolution hum_control(const ProblemSpec& spec, const HUMConfig& cfg) {
  validate_spec(spec);
  const Grid& g = spec.grid;
  cfg.validate(g);
  const auto mask = target_mask(g, cfg.delta);
  const std::size_t ns = g.slice_size();
  const double scale = g.da() * g.dx();

  // b = free final state on the target set.
  const Trajectory free = solve_forward(spec);
  std::vector<double> b(ns);
  {
    auto yT = free.state.slice(g.Nt);
    for (std::size_t k = 0; k < ns; ++k) b[k] = mask[k] * yT[k];
  }

  ProblemSpec zero = spec;
  zero.y0 = Field2(g);
  auto control_of = [&](std::span<const double> psi) {
    Field2 vT(g);
    std::copy(psi.begin(), psi.end(), vT.values.begin());
    const AdjointSolution adj = solve_adjoint(spec, vT);
    return mask_to_omega(spec, adj.q);
  };
  auto gramian = [&](std::span<const double> psi, std::span<double> out) {
    const Field3 f = control_of(psi);
    const Trajectory y = solve_forward(zero, &f);
    auto yT = y.state.slice(g.Nt);
    for (std::size_t k = 0; k < ns; ++k) out[k] = mask[k] * yT[k] + cfg.epsilon * psi[k];
  };

  std::vector<double> rhs(ns);
  for (std::size_t k = 0; k < ns; ++k) rhs[k] = -b[k];
  CGResult cg = conjugate_gradient(gramian, rhs, scale, cfg.cg_tol, cfg.cg_max_iter,
                                   cfg.stagnation_window);
  if (cg.stagnated) {
    std::string curve;
    const std::size_t from = cg.log.size() > 5 ? cg.log.size() - 5 : 0;
    for (std::size_t k = from; k < cg.log.size(); ++k) curve += " " + io::num(cg.log[k].residual);
    throw NumericalError("hum: conjugate gradient stagnated after " +
                         std::to_string(cg.iterations) + " iterations; last residuals:" + curve);
  }

  ControlSolution sol;
  sol.cg_log = cg.log;
  sol.iterations = cg.iterations;
  sol.converged = cg.converged;
  sol.t_switch = g.t0;
  sol.f = Field3(g);
  if (std::any_of(cg.x.begin(), cg.x.end(), [](double v) { return v != 0.0; })) {
    sol.f = control_of(cg.x);
    for (double& v : sol.f.slice(0)) v = 0.0;
  }
  sol.y = solve_forward(spec, &sol.f);
  sol.final_residual = target_norm(g, sol.y.state.slice(g.Nt), cfg.delta);
  sol.J_star = -cg.functional;
  sol.certificate = std::sqrt(2.0 * cfg.epsilon * std::max(sol.J_star, 0.0));
  sol.control_norm = control_l2(g, sol.f);
  Field2 y0 = spec.y0;
  sol.y0_norm = std::sqrt(scale * kernels::dot(y0.values, y0.values));
  sol.bound_ratio = sol.y0_norm > 0.0 ? sol.control_norm / sol.y0_norm : 0.0;
  // Post-hoc certificate; relative slack covers round-off in J*.
  const double slack = 1e-9 * (sol.certificate + sol.y0_norm);
  if (sol.final_residual > sol.certificate + slack)
    throw NumericalError("hum: final residual " + io::num(sol.final_residual) +
                         " exceeds the penalization certificate " + io::num(sol.certificate));
  return sol;
}

}  // namespace popctl
