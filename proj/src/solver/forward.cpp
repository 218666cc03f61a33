#include <algorithm>
#include <cmath>

#include "popctl/error.hpp"
#include "popctl/solver.hpp"
#include "util/io.hpp"

namespace popctl {

namespace {

void check_field(const Field3& f, const Grid& g, const char* what) {
  if (f.Nt != g.Nt || f.Na != g.Na || f.Nx != g.Nx)
    throw ValidationError(std::string(what) + ": dimensions do not match the grid");
}

}  // namespace

Trajectory solve_forward(const ProblemSpec& spec, const Field3* f) {
  StepOperator op(spec);
  const Grid& g = spec.grid;
  if (f) check_field(*f, g, "control");

  Trajectory tr;
  tr.grid = g;
  tr.state = Field3(g);
  {
    auto s0 = tr.state.slice(0);
    std::copy(spec.y0.values.begin(), spec.y0.values.end(), s0.begin());
    for (int j = 0; j <= g.Na; ++j) {
      s0[spec.y0.idx(j, 0)] = 0.0;
      s0[spec.y0.idx(j, g.Nx)] = 0.0;
    }
  }
  tr.energy_log.reserve(static_cast<std::size_t>(g.Nt + 1));
  auto record = [&](int n) {
    auto s = tr.state.slice(n);
    tr.energy_log.push_back({n, g.t(n), op.inner(s, s), op.flux(s)});
  };
  record(0);
  for (int n = 0; n < g.Nt; ++n) {
    std::span<const double> fn;
    if (f) fn = f->slice(n + 1);
    op.forward(tr.state.slice(n), fn, n + 1, tr.state.slice(n + 1));
    for (double v : tr.state.slice(n + 1))
      if (!std::isfinite(v))
        throw NumericalError("forward solve produced a non-finite value at step " +
                             std::to_string(n + 1));
    record(n + 1);
  }
  return tr;
}

Field3 mask_to_omega(const ProblemSpec& spec, const Field3& f) {
  StepOperator op(spec);
  Field3 out = f;
  for (int n = 0; n <= f.Nt; ++n)
    for (int j = 0; j <= f.Na; ++j)
      for (int i = 0; i <= f.Nx; ++i)
        if (op.chi(i) == 0.0) out(n, j, i) = 0.0;
  return out;
}

ResidualNorms discrete_residual(const ProblemSpec& spec, const Field3& y, const Field3& source) {
  StepOperator op(spec);
  const Grid& g = spec.grid;
  check_field(y, g, "state");
  check_field(source, g, "source");
  const double dt = g.dt();
  const std::size_t row = static_cast<std::size_t>(g.Nx + 1);
  std::vector<double> out(row);
  ResidualNorms r;
  double l2 = 0.0;
  for (int n = 0; n < g.Nt; ++n) {
    auto prev = y.slice(n);
    auto next = y.slice(n + 1);
    auto src = source.slice(n + 1);
    double sq = 0.0;
    for (int j = 1; j <= g.Na; ++j) {
      op.apply_implicit(next.subspan(static_cast<std::size_t>(j) * row, row), j, n + 1, out);
      for (int i = 1; i < g.Nx; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * row + i;
        const double res =
            (out[i] - prev[static_cast<std::size_t>(j - 1) * row + i] - dt * src[k]) / dt;
        sq += res * res;
        r.max = std::max(r.max, std::abs(res));
      }
    }
    l2 += dt * g.da() * g.dx() * sq;
    for (int i = 1; i < g.Nx; ++i)
      r.renewal = std::max(r.renewal, std::abs(next[static_cast<std::size_t>(i)] - op.renewal(next, i)));
  }
  r.l2 = std::sqrt(l2);
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j)
      r.dirichlet = std::max({r.dirichlet, std::abs(y(n, j, 0)), std::abs(y(n, j, g.Nx))});
  return r;
}

void write_energy_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::FILE* fp = io::open_out(path);
  std::fputs("step,t,supnorm,flux\n", fp);
  for (const auto& e : traj.energy_log)
    std::fprintf(fp, "%d,%s,%s,%s\n", e.step, io::num(e.t).c_str(), io::num(e.supnorm).c_str(),
                 io::num(e.flux).c_str());
  std::fclose(fp);
}

}  // namespace popctl
