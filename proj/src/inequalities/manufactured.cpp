#include <cmath>
#include <numbers>
#include <random>

#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"

namespace popctl {

namespace {

// Second-order first derivative along a strided line of n+1 values.
double d1(const Field3& v, std::size_t base, std::size_t stride, int idx, int n, double h) {
  auto at = [&](int m) { return v.values[base + static_cast<std::size_t>(m) * stride]; };
  if (idx == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (idx == n) return (3.0 * at(n) - 4.0 * at(n - 1) + at(n - 2)) / (2.0 * h);
  return (at(idx + 1) - at(idx - 1)) / (2.0 * h);
}

}  // namespace

ManufacturedPair manufactured_adjoint(const DegenerateCoefficient& k, const VitalRates& rates,
                                      const Grid& g, const Field3& v) {
  if (v.Nt != g.Nt || v.Na != g.Na || v.Nx != g.Nx)
    throw ValidationError("manufactured: field does not match the grid");
  if (g.Nt < 2 || g.Na < 2 || g.Nx < 2)
    throw ValidationError("manufactured: need at least 2 cells per direction");
  double scale = 0.0;
  for (double x : v.values) scale = std::max(scale, std::abs(x));
  const double tol = 1e-13 * std::max(scale, 1e-300);
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j) {
      if (std::abs(v(n, j, 0)) > tol || std::abs(v(n, j, g.Nx)) > tol)
        throw ValidationError("manufactured: v must vanish at the x endpoints");
    }

  const double dt = g.dt(), da = g.da(), dx = g.dx();
  std::vector<double> kf(static_cast<std::size_t>(g.Nx));
  for (int c = 0; c < g.Nx; ++c) kf[c] = k.face(g.x_lo + (c + 0.5) * dx);

  ManufacturedPair out{g, v, Field3(g)};
  const std::size_t tstride = v.slice_size();
  const std::size_t astride = static_cast<std::size_t>(g.Nx + 1);
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j) {
      for (int i = 1; i < g.Nx; ++i) {
        const double vt = d1(v, v.idx(0, j, i), tstride, n, g.Nt, dt);
        const double va = d1(v, v.idx(n, 0, i), astride, j, g.Na, da);
        const double diff =
            (kf[i] * (v(n, j, i + 1) - v(n, j, i)) - kf[i - 1] * (v(n, j, i) - v(n, j, i - 1))) /
            (dx * dx);
        out.f(n, j, i) = vt + va + diff - rates.mortality(g.t(n), g.a(j), g.x(i)) * v(n, j, i);
      }
      out.f(n, j, 0) = 2.0 * out.f(n, j, 1) - out.f(n, j, 2);
      out.f(n, j, g.Nx) = 2.0 * out.f(n, j, g.Nx - 1) - out.f(n, j, g.Nx - 2);
    }
  return out;
}

ManufacturedPair manufactured_adjoint(const DegenerateCoefficient& k, const VitalRates& rates,
                                      const Grid& g,
                                      const std::function<double(double, double, double)>& v) {
  Field3 f = sample(g, v);
  // Round-off on the x ends (e.g. sin(pi)) is flushed to 0; anything larger
  // is left for the check in the field overload.
  double scale = 0.0;
  for (double e : f.values) scale = std::max(scale, std::abs(e));
  const double flush = 1e-12 * scale;
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j)
      for (int i : {0, g.Nx})
        if (std::abs(f(n, j, i)) <= flush) f(n, j, i) = 0.0;
  return manufactured_adjoint(k, rates, g, f);
}

std::vector<ManufacturedPair> manufactured_family(const DegenerateCoefficient& k,
                                                  const VitalRates& rates, const Grid& g,
                                                  int count, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 7u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double pi = std::numbers::pi;
  std::vector<ManufacturedPair> out;
  for (int m = 0; m < count; ++m) {
    const double c1 = unit(rng), c2 = unit(rng), c3 = unit(rng), c4 = unit(rng);
    const double L = g.x_hi - g.x_lo;
    // Cubic vanishing at a degenerate end keeps (k v_x)_x smooth there; a
    // simple zero at a regular end leaves the boundary observation nonzero.
    const int m0 = g.x_lo == 0.0 && k.zero_at0() ? 3 : 1;
    const int m1 = g.x_hi == 1.0 && k.zero_at1() ? 3 : 1;
    const double peak = std::pow(m0, m0) * std::pow(m1, m1) / std::pow(m0 + m1, m0 + m1);
    auto profile = [=, &g](double t, double a, double x) {
      const double xi = (x - g.x_lo) / L;
      const double bx = std::pow(xi, m0) * std::pow(1.0 - xi, m1) / peak *
                        (1.0 + 0.5 * c1 * std::sin(pi * xi) + 0.3 * c2 * std::cos(2.0 * pi * xi));
      const double ba = (g.A - a) / g.A * (1.0 + 0.5 * c3 * std::cos(pi * a / g.A));
      const double bt = 1.0 + 0.5 * c4 * std::sin(pi * t / g.T);
      return bx * ba * bt;
    };
    out.push_back(manufactured_adjoint(k, rates, g, profile));
  }
  return out;
}

}  // namespace popctl
