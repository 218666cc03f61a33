#include <cmath>

#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"

namespace popctl {

InequalityReport observability_ratio(const ProblemSpec& spec, const std::vector<Field2>& ensemble,
                                     double delta, ObservabilityMode mode) {
  if (ensemble.empty()) throw ValidationError("observability: empty ensemble");
  validate_spec(spec);
  const Grid& g = spec.grid;
  if (!(delta > 0.0 && delta < g.A)) throw ValidationError("observability: delta outside (0, A)");
  const double t_obs = g.T - spec.rates.a_bar;
  const int n_obs = static_cast<int>(std::lround((t_obs - g.t0) / g.dt()));
  if (n_obs < 0 || n_obs > g.Nt)
    throw ValidationError("observability: T - a_bar lies outside the time window");

  StepOperator op(spec);
  const auto wt = trapezoid_weights(g.Nt, g.dt());
  const auto wa = trapezoid_weights(g.Na, g.da());
  const auto wx = trapezoid_weights(g.Nx, g.dx());
  std::vector<double> young(wa.size());
  for (int j = 0; j <= g.Na; ++j) young[j] = g.a(j) <= delta + 1e-12 * g.A ? wa[j] : 0.0;

  // int int w_a(j) w_x(i) u^2 with an optional x mask.
  auto slice_norm = [&](std::span<const double> u, const std::vector<double>& age_w,
                        bool in_omega) {
    double acc = 0.0;
    for (int j = 0; j <= g.Na; ++j) {
      if (age_w[j] == 0.0) continue;
      double row = 0.0;
      for (int i = 0; i <= g.Nx; ++i) {
        if (in_omega && op.chi(i) == 0.0) continue;
        const double v = u[static_cast<std::size_t>(j) * (g.Nx + 1) + i];
        row += wx[i] * v * v;
      }
      acc += age_w[j] * row;
    }
    return acc;
  };

  InequalityReport rep;
  rep.name = "observability";
  rep.grid = g;
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const Field2& vT = ensemble[m];
    if (mode == ObservabilityMode::zero_near_0) {
      for (int j = 0; j <= g.Na; ++j)
        if (g.a(j) < delta)
          for (int i = 0; i <= g.Nx; ++i)
            if (vT(j, i) != 0.0)
              throw ValidationError("observability: v_T must vanish for a < delta in this mode");
    }
    const AdjointSolution sol = solve_adjoint(spec, vT);
    const Field3& v = sol.v.state;
    const double lhs = slice_norm(v.slice(n_obs), wa, false);
    double rhs = 0.0;
    if (mode != ObservabilityMode::zero_near_0) rhs += slice_norm(v.slice(g.Nt), young, false);
    for (int n = 0; n <= g.Nt; ++n) {
      rhs += wt[n] * slice_norm(v.slice(n), wa, true);
      if (mode == ObservabilityMode::with_interior)
        rhs += wt[n] * slice_norm(v.slice(n), young, false);
    }
    rep.add(static_cast<int>(m), 0.0, lhs, rhs);
  }
  return rep;
}

}  // namespace popctl
