#include <algorithm>
#include <cmath>

#include "popctl/solver.hpp"

namespace popctl {

EnergyAudit energy_audit(const Trajectory& traj, const ProblemSpec& spec, const Field3* f) {
  StepOperator op(spec);
  const Grid& g = spec.grid;
  const double dt = g.dt();
  EnergyAudit a;
  a.nonincreasing = true;
  double prev = -1.0;
  for (const auto& e : traj.energy_log) {
    a.sup_norm = std::max(a.sup_norm, e.supnorm);
    if (e.step > 0) a.flux_integral += dt * e.flux;
    if (prev >= 0.0 && e.supnorm > prev * (1.0 + 1e-12)) a.nonincreasing = false;
    prev = e.supnorm;
  }
  a.lhs = a.sup_norm + a.flux_integral;

  auto s0 = traj.state.slice(0);
  double data = op.inner(s0, s0);
  if (f) {
    const Field3 fm = mask_to_omega(spec, *f);
    for (int n = 1; n <= g.Nt; ++n) {
      auto s = fm.slice(n);
      // Only age levels >= 1 enter the scheme.
      const std::size_t skip = static_cast<std::size_t>(g.Nx + 1);
      data += dt * op.inner(s.subspan(skip), s.subspan(skip));
    }
  }
  a.data = data;
  const double horizon = g.T - g.t0;
  const double b = spec.rates.beta_sup(g);
  a.C = std::exp(g.A * b * b * horizon) * (1.0 + horizon);
  a.rhs_bound = a.C * a.data;
  a.pass = a.lhs <= a.rhs_bound * (1.0 + 1e-12);
  return a;
}

}  // namespace popctl
