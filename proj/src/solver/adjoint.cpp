#include <cmath>

#include "popctl/error.hpp"
#include "popctl/solver.hpp"

namespace popctl {

AdjointSolution solve_adjoint(const ProblemSpec& spec, const Field2& v_T, const Field3* g_src) {
  StepOperator op(spec);
  const Grid& g = spec.grid;
  if (v_T.Na != g.Na || v_T.Nx != g.Nx)
    throw ValidationError("v_T: dimensions do not match the grid");
  for (int i = 0; i <= g.Nx; ++i)
    if (v_T(g.Na, i) != 0.0) throw ValidationError("v_T must vanish on the a = A level");
  if (g_src && (g_src->Nt != g.Nt || g_src->Na != g.Na || g_src->Nx != g.Nx))
    throw ValidationError("adjoint source: dimensions do not match the grid");

  AdjointSolution out;
  out.v.grid = g;
  out.v.state = Field3(g);
  out.q = Field3(g);
  {
    Field2 vt = v_T;
    for (int j = 0; j <= g.Na; ++j) {
      vt(j, 0) = 0.0;
      vt(j, g.Nx) = 0.0;
    }
    out.v.state.set(g.Nt, vt);
  }
  std::vector<EnergyRecord> log(static_cast<std::size_t>(g.Nt + 1));
  auto record = [&](int n) {
    auto s = out.v.state.slice(n);
    log[static_cast<std::size_t>(n)] = {n, g.t(n), op.inner(s, s), op.flux(s)};
  };
  record(g.Nt);
  for (int n = g.Nt - 1; n >= 0; --n) {
    std::span<const double> gn;
    if (g_src) gn = g_src->slice(n + 1);
    op.adjoint(out.v.state.slice(n + 1), gn, n + 1, out.v.state.slice(n), out.q.slice(n + 1));
    for (double v : out.v.state.slice(n))
      if (!std::isfinite(v))
        throw NumericalError("adjoint solve produced a non-finite value at step " +
                             std::to_string(n));
    record(n);
  }
  out.v.energy_log = std::move(log);
  return out;
}

}  // namespace popctl
