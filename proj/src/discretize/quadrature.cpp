#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "popctl/discretize.hpp"
#include "popctl/error.hpp"

namespace popctl {

std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(static_cast<std::size_t>(n + 1), h);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double weighted_norm(const Field2& f, const Grid& g, const WeightSpec& ws) {
  const auto wa = trapezoid_weights(g.Na, g.da());
  const double dx = g.dx();
  double total = 0.0;
  for (int j = 0; j <= g.Na; ++j) {
    const double a = g.a(j);
    auto node_w = [&](int i) {
      if (!ws.weight) return 1.0;
      const double w = ws.weight(a, g.x(i));
      if (!std::isfinite(w))
        throw ValidationError("weighted_norm: non-finite weight at node (a=" +
                              std::to_string(a) + ", x=" + std::to_string(g.x(i)) + ")");
      return w;
    };
    double row = 0.0;
    for (int c = 0; c < g.Nx; ++c) {
      const double f0 = f(j, c);
      const double f1 = f(j, c + 1);
      const bool edge = c == 0 || c == g.Nx - 1;
      if (ws.weight && ws.midpoint_at_endpoints && edge) {
        const double wm = ws.weight(a, g.x_lo + (c + 0.5) * dx);
        row += wm * 0.5 * (f0 * f0 + f1 * f1);
      } else {
        row += 0.5 * (node_w(c) * f0 * f0 + node_w(c + 1) * f1 * f1);
      }
    }
    total += wa[static_cast<std::size_t>(j)] * row * dx;
  }
  return total;
}

double weighted_norm(const Field3& f, const Grid& g,
                     const std::function<double(double t, double a, double x)>& w) {
  const auto wt = trapezoid_weights(g.Nt, g.dt());
  const auto wa = trapezoid_weights(g.Na, g.da());
  const auto wx = trapezoid_weights(g.Nx, g.dx());
  double total = 0.0;
  for (int n = 0; n <= g.Nt; ++n) {
    double s = 0.0;
    for (int j = 0; j <= g.Na; ++j) {
      double row = 0.0;
      for (int i = 0; i <= g.Nx; ++i) {
        const double v = f(n, j, i);
        if (v == 0.0) continue;
        double weight = 1.0;
        if (w) {
          weight = w(g.t(n), g.a(j), g.x(i));
          if (!std::isfinite(weight))
            throw ValidationError("weighted_norm: non-finite weight at a node");
        }
        row += wx[static_cast<std::size_t>(i)] * weight * v * v;
      }
      s += wa[static_cast<std::size_t>(j)] * row;
    }
    total += wt[static_cast<std::size_t>(n)] * s;
  }
  return total;
}

double integrate_singular(
    const std::function<double(double x, double dist_lo, double dist_hi)>& f,
    double lo, double hi, double tol) {
  if (!(hi > lo)) return 0.0;
  // Distances below 1e-150 are not sampled; this keeps products like
  // k (w/(1-x))^2 finite for near-critical power laws.
  boost::math::quadrature::tanh_sinh<double> integrator(15, 1e-150);
  const double mid = 0.5 * (lo + hi);
  // Boost passes the signed distance to the nearer endpoint: lo - x on the
  // left half, hi - x on the right half.
  auto g = [&](double x, double xc) {
    double dlo, dhi;
    if (x <= mid) {
      dlo = xc < 0 ? -xc : x - lo;
      dhi = hi - x;
    } else {
      dhi = xc > 0 ? xc : hi - x;
      dlo = x - lo;
    }
    return f(x, dlo, dhi);
  };
  return integrator.integrate(g, lo, hi, tol);
}

}  // namespace popctl
