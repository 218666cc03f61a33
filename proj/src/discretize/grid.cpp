#include <cmath>
#include <string>

#include "popctl/discretize.hpp"
#include "popctl/error.hpp"

namespace popctl {

void Grid::validate() const {
  if (Nt <= 0 || Na <= 0 || Nx <= 0)
    throw ValidationError("grid: Nt, Na, Nx must be positive");
  if (!(T > t0) || !(A > 0.0) || !(x_hi > x_lo))
    throw ValidationError("grid: empty time, age or space interval");
  if (dt_equals_da) {
    const double dt_ = dt();
    const double da_ = da();
    if (std::abs(dt_ - da_) > 1e-12 * std::max(dt_, da_))
      throw ValidationError("grid: dt = " + std::to_string(dt_) + " differs from da = " +
                            std::to_string(da_) + " (need (T-t0)/Nt = A/Na)");
  }
}

Grid Grid::cube(double T, int N) {
  Grid g;
  g.T = T;
  g.A = T;
  g.Nt = g.Na = g.Nx = N;
  return g;
}

Field2::Field2(int na, int nx, double fill)
    : Na(na), Nx(nx),
      values(static_cast<std::size_t>(na + 1) * static_cast<std::size_t>(nx + 1), fill) {}

Field3::Field3(int nt, int na, int nx, double fill)
    : Nt(nt), Na(na), Nx(nx),
      values(static_cast<std::size_t>(nt + 1) * static_cast<std::size_t>(na + 1) *
                 static_cast<std::size_t>(nx + 1),
             fill) {}

Field2 Field3::at(int n) const {
  Field2 f(Na, Nx);
  auto s = slice(n);
  f.values.assign(s.begin(), s.end());
  return f;
}

void Field3::set(int n, const Field2& f) {
  auto s = slice(n);
  std::copy(f.values.begin(), f.values.end(), s.begin());
}

Field2 sample(const Grid& g, const std::function<double(double a, double x)>& fn) {
  Field2 f(g);
  for (int j = 0; j <= g.Na; ++j)
    for (int i = 0; i <= g.Nx; ++i) f(j, i) = fn(g.a(j), g.x(i));
  return f;
}

Field3 sample(const Grid& g, const std::function<double(double t, double a, double x)>& fn) {
  Field3 f(g);
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j)
      for (int i = 0; i <= g.Nx; ++i) f(n, j, i) = fn(g.t(n), g.a(j), g.x(i));
  return f;
}

}  // namespace popctl
