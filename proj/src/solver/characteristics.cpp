#include <algorithm>
#include <cmath>

#include "popctl/error.hpp"
#include "popctl/solver.hpp"

namespace popctl {

double characteristic_gamma(double t, double a, double T_tilde, double a_bar, double A) {
  return std::min(a_bar, A - a + t - T_tilde);
}

namespace {

// One backward-Euler substep of length h on a single level, in place.
void diffuse(std::vector<double>& w, std::span<const double> face_k,
             const std::vector<double>& mu, double h, double dx) {
  const int Nx = static_cast<int>(face_k.size());
  const int m = Nx - 1;
  const double r = h / (dx * dx);
  std::vector<double> c(static_cast<std::size_t>(m)), d(static_cast<std::size_t>(m));
  for (int u = 0; u < m; ++u) {
    const double lo = -r * face_k[u];
    const double up = -r * face_k[u + 1];
    const double diag = 1.0 + r * (face_k[u] + face_k[u + 1]) + h * mu[u + 1];
    const double rhs = w[u + 1];
    if (u == 0) {
      c[u] = up / diag;
      d[u] = rhs / diag;
    } else {
      const double den = diag - lo * c[u - 1];
      c[u] = up / den;
      d[u] = (rhs - lo * d[u - 1]) / den;
    }
  }
  for (int u = m - 2; u >= 0; --u) d[u] -= c[u] * d[u + 1];
  for (int u = 0; u < m; ++u) w[u + 1] = d[u];
}

}  // namespace

CharacteristicDefect characteristic_consistency(const ProblemSpec& spec, const Field2& v_T,
                                                std::vector<std::pair<int, int>> samples,
                                                int substeps) {
  const Grid& g = spec.grid;
  if (substeps < 1) throw ValidationError("characteristics: substeps must be >= 1");
  for (int j = 0; j <= g.Na; ++j)
    for (int i = 0; i <= g.Nx; ++i)
      if (spec.rates.fertility(g.a(j), g.x(i)) != 0.0)
        throw ValidationError("characteristics: requires beta = 0");

  const AdjointSolution adj = solve_adjoint(spec, v_T);
  StepOperator op(spec);
  const int N = g.Nt;
  if (samples.empty()) {
    for (int n : {0, N / 2, N})
      for (int j = 0; j <= g.Na; j += std::max(1, g.Na / 8)) samples.emplace_back(n, j);
  }

  CharacteristicDefect out;
  out.samples = samples;
  const double h = g.dt() / substeps;
  std::vector<double> w(static_cast<std::size_t>(g.Nx + 1));
  std::vector<double> mu(static_cast<std::size_t>(g.Nx + 1));
  for (const auto& [n, j] : samples) {
    const int J = j + (N - n);
    std::fill(w.begin(), w.end(), 0.0);
    if (J <= g.Na && j < g.Na) {
      for (int i = 1; i < g.Nx; ++i) w[i] = v_T(J, i);
      for (int m = N; m >= n + 1; --m) {
        const int age = j + (m - n);
        for (int i = 1; i < g.Nx; ++i) mu[i] = spec.rates.mortality(g.t(m), g.a(age), g.x(i));
        for (int s = 0; s < substeps; ++s) diffuse(w, op.face_k(), mu, h, g.dx());
      }
    }
    double diff = 0.0, ref = 0.0;
    for (int i = 0; i <= g.Nx; ++i) {
      diff = std::max(diff, std::abs(adj.v.state(n, j, i) - w[i]));
      ref = std::max(ref, std::abs(w[i]));
    }
    out.max_absolute = std::max(out.max_absolute, diff);
    if (ref > 0.0) out.max_relative = std::max(out.max_relative, diff / ref);
  }
  return out;
}

}  // namespace popctl
