#include <algorithm>
#include <cmath>
#include <numbers>

#include "popctl/control.hpp"
#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"
#include "popctl/kernels.hpp"
#include "util/io.hpp"

namespace popctl {

namespace {

// Sub-spec on the x nodes [i_lo, i_hi] of the full grid.
ProblemSpec restrict_x(const ProblemSpec& spec, int i_lo, int i_hi) {
  ProblemSpec s = spec;
  const Grid& g = spec.grid;
  s.grid.x_lo = g.x(i_lo);
  s.grid.x_hi = g.x(i_hi);
  s.grid.Nx = i_hi - i_lo;
  s.y0 = Field2(s.grid);
  for (int j = 0; j <= g.Na; ++j)
    for (int i = i_lo; i <= i_hi; ++i) s.y0(j, i - i_lo) = spec.y0(j, i);
  return s;
}

Field3 extend_x(const Field3& f, const Grid& g, int i_lo) {
  Field3 out(g);
  for (int n = 0; n <= f.Nt; ++n)
    for (int j = 0; j <= f.Na; ++j)
      for (int i = 0; i <= f.Nx; ++i) out(n, j, i + i_lo) = f(n, j, i);
  return out;
}

double max_abs(const Field3& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double manufactured_consistency_error(const ProblemSpec& spec) {
  const Grid& g = spec.grid;
  const auto& k = spec.k;
  const auto& rates = spec.rates;
  const double pi = std::numbers::pi;
  const double L = g.x_hi - g.x_lo;
  // y = e^{-t} (1 + cos(pi a / A) / 2) X(x), X = 16 xi^2 (1 - xi)^2.
  auto X = [&](double x) {
    const double xi = (x - g.x_lo) / L;
    return 16.0 * xi * xi * (1.0 - xi) * (1.0 - xi);
  };
  auto dX = [&](double x) {
    const double xi = (x - g.x_lo) / L;
    return 32.0 * xi * (1.0 - xi) * (1.0 - 2.0 * xi) / L;
  };
  auto d2X = [&](double x) {
    const double xi = (x - g.x_lo) / L;
    return 32.0 * (1.0 - 6.0 * xi + 6.0 * xi * xi) / (L * L);
  };
  auto Aa = [&](double a) { return 1.0 + 0.5 * std::cos(pi * a / g.A); };
  auto dAa = [&](double a) { return -0.5 * pi / g.A * std::sin(pi * a / g.A); };
  const Field3 y = sample(g, [&](double t, double a, double x) {
    return std::exp(-t) * Aa(a) * X(x);
  });
  const Field3 src = sample(g, [&](double t, double a, double x) {
    const double e = std::exp(-t);
    const double yv = e * Aa(a) * X(x);
    const double diff = e * Aa(a) * (k.derivative(x) * dX(x) + k(x) * d2X(x));
    return -yv + e * dAa(a) * X(x) - diff + rates.mortality(t, a, x) * yv;
  });
  const ResidualNorms r = discrete_residual(spec, y, src);
  return r.max / max_abs(y);
}

ControlSolution glue_two_sided(const ProblemSpec& spec, const HUMConfig& cfg, double alpha_bar,
                               double beta_bar) {
  validate_spec(spec);
  const Grid& g = spec.grid;
  cfg.validate(g);
  if (g.x_lo != 0.0 || g.x_hi != 1.0) throw ValidationError("glue: grid must cover x in [0, 1]");
  if (!(spec.k.zero_at0() && spec.k.zero_at1()))
    throw ValidationError("glue: k must degenerate at both endpoints");
  const auto [alpha, rho] = spec.omega;
  if (!(alpha_bar > 0.0 && alpha_bar < alpha && beta_bar > rho && beta_bar < 1.0))
    throw ValidationError("glue: need 0 < alpha_bar < alpha and rho < beta_bar < 1");
  const double dx = g.dx();
  const int i_a = static_cast<int>(std::lround(alpha_bar / dx));
  const int i_b = static_cast<int>(std::lround(beta_bar / dx));
  if (!(i_a >= 1 && g.x(i_a) < alpha && i_b <= g.Nx - 1 && g.x(i_b) > rho))
    throw ValidationError("glue: alpha_bar, beta_bar do not snap to nodes outside omega");

  // P1 on [0, beta_bar], P2 on [alpha_bar, 1], free u3 on [0, 1].
  const ProblemSpec s1 = restrict_x(spec, 0, i_b);
  const ProblemSpec s2 = restrict_x(spec, i_a, g.Nx);
  const ControlSolution p1 = compose_delay_control(s1, cfg);
  const ControlSolution p2 = compose_delay_control(s2, cfg);
  const Trajectory u3 = solve_forward(spec);
  const Field3 u1 = extend_x(p1.y.state, g, 0);
  const Field3 u2 = extend_x(p2.y.state, g, i_a);
  const Field3 h1 = extend_x(p1.f, g, 0);
  const Field3 h2 = extend_x(p2.f, g, i_a);

  const CutoffFamily cut(alpha, rho);
  const std::size_t row = static_cast<std::size_t>(g.Nx + 1);
  std::vector<double> xi(row), eta(row), phi(row);
  for (int i = 0; i <= g.Nx; ++i) {
    xi[i] = cut.xi(g.x(i)).v;
    eta[i] = cut.eta(g.x(i)).v;
    phi[i] = cut.phi(g.x(i)).v;
  }
  const double span_t = g.T - g.t0;
  auto F = [&](int n) { return (g.T - g.t(n)) / span_t; };

  ControlSolution out;
  out.y.grid = g;
  out.y.state = Field3(g);
  out.f = Field3(g);
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j)
      for (int i = 0; i <= g.Nx; ++i)
        out.y.state(n, j, i) =
            xi[i] * u1(n, j, i) + eta[i] * u2(n, j, i) + F(n) * phi[i] * u3.state(n, j, i);
  out.y.state.set(0, spec.y0);

  // f = xi h1 + eta h2 + C_xi u1 + C_eta u2 - phi u3(n)_{j-1} / (T - t0) + F C_phi u3,
  // with C_c u = ((I + dt L)(c u) - c (I + dt L) u) / dt.
  const StepOperator op(spec);
  const double dt = g.dt();
  std::vector<double> cu(row), a1(row), a2(row);
  auto commutator = [&](const Field3& u, const std::vector<double>& c, int n, int j,
                        std::vector<double>& res) {
    for (int i = 0; i <= g.Nx; ++i) cu[i] = c[i] * u(n, j, i);
    std::span<const double> lvl(u.values.data() + u.idx(n, j, 0), row);
    op.apply_implicit(cu, j, n, a1);
    op.apply_implicit(lvl, j, n, a2);
    for (int i = 0; i <= g.Nx; ++i) res[i] = (a1[i] - c[i] * a2[i]) / dt;
  };
  std::vector<double> c1(row), c2(row), c3(row);
  for (int n = 1; n <= g.Nt; ++n)
    for (int j = 1; j <= g.Na; ++j) {
      commutator(u1, xi, n, j, c1);
      commutator(u2, eta, n, j, c2);
      commutator(u3.state, phi, n, j, c3);
      for (int i = 1; i < g.Nx; ++i) {
        double v = xi[i] * h1(n, j, i) + eta[i] * h2(n, j, i) + c1[i] + c2[i] -
                   phi[i] * u3.state(n - 1, j - 1, i) / span_t + F(n) * c3[i];
        out.f(n, j, i) = op.chi(i) != 0.0 ? v : 0.0;
        if (op.chi(i) == 0.0 && v != 0.0)
          throw NumericalError("glue: assembled control is nonzero outside omega at x = " +
                               io::num(g.x(i)));
      }
    }

  const double scale = g.da() * g.dx();
  const ResidualNorms res = discrete_residual(spec, out.y.state, out.f);
  const double ymax = max_abs(out.y.state);
  out.residual_max = ymax > 0.0 ? res.max / ymax : res.max;
  out.consistency_error = manufactured_consistency_error(spec);
  out.glue_tolerance = 10.0 * out.consistency_error;
  out.final_residual = target_norm(g, out.y.state.slice(g.Nt), cfg.delta);
  out.sub_certificates = {p1.certificate, p2.certificate};
  out.sub_control_norms = {p1.control_norm, p2.control_norm};
  out.certificate = p1.certificate + p2.certificate;
  double acc = 0.0;
  for (int n = 1; n <= g.Nt; ++n) {
    auto s = out.f.slice(n);
    acc += kernels::dot(s, s);
  }
  out.control_norm = std::sqrt(g.dt() * scale * acc);
  Field2 y0 = spec.y0;
  out.y0_norm = std::sqrt(scale * kernels::dot(y0.values, y0.values));
  out.bound_ratio = out.y0_norm > 0.0 ? out.control_norm / out.y0_norm : 0.0;
  out.t_switch = p1.t_switch;
  out.n_switch = p1.n_switch;
  out.iterations = p1.iterations + p2.iterations;
  out.converged = p1.converged && p2.converged;
  out.warnings = p1.warnings;
  for (const auto& w : p2.warnings) out.warnings.push_back(w);
  for (int n = 0; n <= g.Nt; ++n) {
    auto s = out.y.state.slice(n);
    out.y.energy_log.push_back({n, g.t(n), op.inner(s, s), op.flux(s)});
  }
  return out;
}

}  // namespace popctl
