#include <cmath>
#include <string>

#include "popctl/error.hpp"
#include "popctl/kernels.hpp"
#include "popctl/solver.hpp"

namespace popctl {

void validate_spec(const ProblemSpec& spec) {
  const Grid& g = spec.grid;
  g.validate();
  if (g.Nx < 2) throw ValidationError("grid: Nx must be at least 2");
  if (spec.y0.Na != g.Na || spec.y0.Nx != g.Nx)
    throw ValidationError("y0: dimensions do not match the grid");
  for (double v : spec.y0.values)
    if (!std::isfinite(v)) throw ValidationError("y0: non-finite value");
  const auto [lo, hi] = spec.omega;
  if (!(0.0 < lo && lo < hi && hi < 1.0))
    throw ValidationError("omega must satisfy 0 < alpha < rho < 1");
}

StepOperator::StepOperator(const ProblemSpec& spec) : grid_(spec.grid), rates_(spec.rates) {
  validate_spec(spec);
  const Grid& g = grid_;
  const int Nx = g.Nx;
  const int Na = g.Na;
  const double dx = g.dx();
  const double dt = g.dt();
  const double r = dt / (dx * dx);

  face_k_.resize(static_cast<std::size_t>(Nx));
  for (int c = 0; c < Nx; ++c) {
    const double xm = g.x_lo + (c + 0.5) * dx;
    face_k_[c] = spec.k.face(xm);
    if (!(face_k_[c] >= 0.0) || !std::isfinite(face_k_[c]))
      throw ValidationError("k: invalid face value at x = " + std::to_string(xm));
  }

  chi_.assign(static_cast<std::size_t>(Nx + 1), 0.0);
  for (int i = 1; i < Nx; ++i) {
    const double x = g.x(i);
    // Small slack so nodes that sit on the omega endpoints count as inside.
    const double eps = 1e-12 * dx;
    if (x >= spec.omega.first - eps && x <= spec.omega.second + eps) chi_[i] = 1.0;
  }

  const auto wa = trapezoid_weights(Na, g.da());
  renew_w_.assign(g.slice_size(), 0.0);
  for (int i = 1; i < Nx; ++i) {
    const double x = g.x(i);
    const double b0 = spec.rates.fertility(0.0, x);
    const double denom = 1.0 - wa[0] * b0;
    if (!(denom > 0.0))
      throw ValidationError("beta(0, x) too large: renewal row is singular at x = " +
                            std::to_string(x));
    const double c = 1.0 / denom;
    for (int j = 1; j <= Na; ++j)
      renew_w_[static_cast<std::size_t>(j) * (Nx + 1) + i] =
          c * wa[static_cast<std::size_t>(j)] * spec.rates.fertility(g.a(j), x);
  }

  const int m = Nx - 1;
  lower_.assign(static_cast<std::size_t>(m), 0.0);
  upper_.assign(static_cast<std::size_t>(m), 0.0);
  for (int u = 0; u < m; ++u) {
    lower_[u] = -r * face_k_[u];
    upper_[u] = -r * face_k_[u + 1];
  }
  mu_time_dependent_ = rates_.mu.family == RateFunction::Family::custom;
  const std::size_t sys = static_cast<std::size_t>(m) * static_cast<std::size_t>(Na);
  diag_.assign(sys, 0.0);
  work_.assign(sys, 0.0);
  buf_.assign(sys, 0.0);
}

void StepOperator::solve_levels(std::span<double> rhs, int n) const {
  const Grid& g = grid_;
  const int m = g.Nx - 1;
  const int Na = g.Na;
  if (diag_step_ < 0 || (mu_time_dependent_ && diag_step_ != n)) {
    const double dt = g.dt();
    const double r = dt / (g.dx() * g.dx());
    const double t = g.t(n);
    for (int u = 0; u < m; ++u) {
      const double base = 1.0 + r * (face_k_[u] + face_k_[u + 1]);
      const double x = g.x(u + 1);
      for (int b = 0; b < Na; ++b)
        diag_[static_cast<std::size_t>(u) * Na + b] = base + dt * rates_.mortality(t, g.a(b + 1), x);
    }
    diag_step_ = n;
  }
  kernels::TridiagBatch sys{lower_, upper_, diag_, rhs, work_,
                            static_cast<std::size_t>(m), static_cast<std::size_t>(Na)};
  kernels::solve_tridiag_batched(sys);
}

void StepOperator::forward(std::span<const double> y_prev, std::span<const double> f_next,
                           int n_next, std::span<double> y_next) const {
  const Grid& g = grid_;
  const int Nx = g.Nx;
  const int Na = g.Na;
  const int m = Nx - 1;
  const double dt = g.dt();
  const std::size_t row = static_cast<std::size_t>(Nx + 1);

  for (int u = 0; u < m; ++u) {
    const int i = u + 1;
    for (int b = 0; b < Na; ++b) {
      const int j = b + 1;
      double v = y_prev[static_cast<std::size_t>(j - 1) * row + i];
      if (!f_next.empty()) v += dt * chi_[i] * f_next[static_cast<std::size_t>(j) * row + i];
      buf_[static_cast<std::size_t>(u) * Na + b] = v;
    }
  }
  solve_levels(buf_, n_next);
  for (int j = 1; j <= Na; ++j) {
    double* out = y_next.data() + static_cast<std::size_t>(j) * row;
    out[0] = 0.0;
    out[Nx] = 0.0;
    for (int u = 0; u < m; ++u) out[u + 1] = buf_[static_cast<std::size_t>(u) * Na + (j - 1)];
  }
  y_next[0] = 0.0;
  y_next[static_cast<std::size_t>(Nx)] = 0.0;
  for (int i = 1; i < Nx; ++i) y_next[static_cast<std::size_t>(i)] = renewal(y_next, i);
}

double StepOperator::renewal(std::span<const double> y, int i) const {
  const int Nx = grid_.Nx;
  double s = 0.0;
  for (int j = 1; j <= grid_.Na; ++j) {
    const std::size_t k = static_cast<std::size_t>(j) * (Nx + 1) + i;
    s += renew_w_[k] * y[k];
  }
  return s;
}

void StepOperator::adjoint(std::span<const double> v_next, std::span<const double> g_next,
                           int n_next, std::span<double> v_prev,
                           std::span<double> q_next) const {
  const Grid& g = grid_;
  const int Nx = g.Nx;
  const int Na = g.Na;
  const int m = Nx - 1;
  const double dt = g.dt();
  const std::size_t row = static_cast<std::size_t>(Nx + 1);

  for (int u = 0; u < m; ++u) {
    const int i = u + 1;
    const double v0 = v_next[static_cast<std::size_t>(i)];
    for (int b = 0; b < Na; ++b) {
      const std::size_t k = static_cast<std::size_t>(b + 1) * row + i;
      double p = v_next[k] + renew_w_[k] * v0;
      if (!g_next.empty()) p -= dt * g_next[k];
      buf_[static_cast<std::size_t>(u) * Na + b] = p;
    }
  }
  solve_levels(buf_, n_next);

  std::fill(v_prev.begin(), v_prev.end(), 0.0);
  if (!q_next.empty()) std::fill(q_next.begin(), q_next.end(), 0.0);
  for (int u = 0; u < m; ++u) {
    const int i = u + 1;
    for (int b = 0; b < Na; ++b) {
      const double q = buf_[static_cast<std::size_t>(u) * Na + b];
      v_prev[static_cast<std::size_t>(b) * row + i] = q;
      if (!q_next.empty()) q_next[static_cast<std::size_t>(b + 1) * row + i] = q;
    }
  }
}

void StepOperator::apply_implicit(std::span<const double> u, int j, int n,
                                  std::span<double> out) const {
  const Grid& g = grid_;
  const int Nx = g.Nx;
  const double dt = g.dt();
  const double r = dt / (g.dx() * g.dx());
  const double t = g.t(n);
  const double a = g.a(j);
  out[0] = 0.0;
  out[static_cast<std::size_t>(Nx)] = 0.0;
  for (int i = 1; i < Nx; ++i) {
    const double kl = face_k_[i - 1];
    const double kr = face_k_[i];
    const double mu = rates_.mortality(t, a, g.x(i));
    out[i] = (1.0 + dt * mu) * u[i] + r * (kl * (u[i] - u[i - 1]) - kr * (u[i + 1] - u[i]));
  }
}

double StepOperator::inner(std::span<const double> a, std::span<const double> b) const {
  return grid_.da() * grid_.dx() * kernels::dot(a, b);
}

double StepOperator::flux(std::span<const double> u) const {
  const int Nx = grid_.Nx;
  const std::size_t row = static_cast<std::size_t>(Nx + 1);
  double s = 0.0;
  for (int j = 0; j <= grid_.Na; ++j) {
    const double* y = u.data() + static_cast<std::size_t>(j) * row;
    for (int c = 0; c < Nx; ++c) {
      const double d = y[c + 1] - y[c];
      s += face_k_[c] * d * d;
    }
  }
  return grid_.da() * s / grid_.dx();
}

}  // namespace popctl
