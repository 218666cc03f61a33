#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"

namespace popctl {

namespace {

// Integrals are taken per grid cell with a 4-point Gauss rule in each of t, a
// and x: the weights are evaluated exactly at the Gauss points and the grid
// data (v, f) is interpolated trilinearly, so a weight concentrated below the
// grid spacing is still resolved. v_x is the cell difference quotient.
//
//   lhs = int [ e^{gp (log s + log Th) + 2 s Th pot} grad_w v_x^2
//             + e^{3 (log s + log Th) + 2 s Th pot} zero_w v^2 ]
//   rhs = int e^{2 s Th pot_f} f^2 + boundary terms + int_obs v^2
constexpr int kGauss = 4;
constexpr double kNode[kGauss] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                  0.8611363115940526};
constexpr double kWeight[kGauss] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                    0.3478548451374538};

// Quadrature point in x: cell c, local coordinate lambda in (0,1), distances
// to the interval ends computed without cancellation.
struct XPoint {
  int cell = 0;
  double lambda = 0.0;
  double x = 0.0;
  double d_lo = 0.0;
  double d_hi = 0.0;
};

std::vector<XPoint> x_points(const Grid& g) {
  std::vector<XPoint> pts;
  const double dx = g.dx();
  for (int c = 0; c < g.Nx; ++c)
    for (int q = 0; q < kGauss; ++q) {
      XPoint p;
      p.cell = c;
      p.lambda = 0.5 * (1.0 + kNode[q]);
      p.d_lo = (c + p.lambda) * dx;
      p.d_hi = ((g.Nx - c) - p.lambda) * dx;
      p.x = g.x_lo + p.d_lo;
      pts.push_back(p);
    }
  return pts;
}

struct Boundary {
  bool at_hi = true;
  double coef = 0.0;  // multiplies s Th e^{2 s Th pot} v_x^2; may be negative
  double pot = 0.0;
};

// Values at the x_points of the sample grid.
struct Profile {
  std::vector<double> pot, grad_w, zero_w, pot_f, obs;  // obs: 1 inside the observed set
  std::vector<Boundary> bnd;
  bool has_obs = false;
  double grad_pow = 1.0;  // power of s Theta on the gradient term
};

void sides(const ManufacturedPair& smp, const Profile& pr, double s, double& lhs, double& rhs) {
  const Grid& g = smp.grid;
  if (g.t0 != 0.0) throw ValidationError("carleman: samples must start at t = 0");
  const double dt = g.dt(), da = g.da(), dx = g.dx();
  const int Nx = g.Nx;
  const auto pts = x_points(g);
  const std::size_t row = static_cast<std::size_t>(Nx + 1);
  std::vector<double> vr(row), fr(row);
  const double ls = std::log(s);
  lhs = 0.0;
  rhs = 0.0;
  for (int n = 0; n < g.Nt; ++n)
    for (int j = 0; j < g.Na; ++j)
      for (int qt = 0; qt < kGauss; ++qt)
        for (int qa = 0; qa < kGauss; ++qa) {
          const double lt_ = 0.5 * (1.0 + kNode[qt]), la = 0.5 * (1.0 + kNode[qa]);
          const double t = g.t0 + (n + lt_) * dt;
          const double a = (j + la) * da;
          const double W = 0.25 * dt * da * kWeight[qt] * kWeight[qa];
          const double c00 = (1 - lt_) * (1 - la), c01 = (1 - lt_) * la;
          const double c10 = lt_ * (1 - la), c11 = lt_ * la;
          for (std::size_t i = 0; i < row; ++i) {
            const int ii = static_cast<int>(i);
            vr[i] = c00 * smp.v(n, j, ii) + c01 * smp.v(n, j + 1, ii) +
                    c10 * smp.v(n + 1, j, ii) + c11 * smp.v(n + 1, j + 1, ii);
            fr[i] = c00 * smp.f(n, j, ii) + c01 * smp.f(n, j + 1, ii) +
                    c10 * smp.f(n + 1, j, ii) + c11 * smp.f(n + 1, j + 1, ii);
          }
          const double lt = -4.0 * (std::log(t) + std::log(g.T - t) + std::log(a));
          const double sth = s * std::exp(lt);
          double l = 0.0, r = 0.0, o = 0.0;
          for (std::size_t q = 0; q < pts.size(); ++q) {
            const XPoint& p = pts[q];
            const double wx = 0.5 * dx * kWeight[q % kGauss];
            const double v0 = vr[p.cell], v1 = vr[p.cell + 1];
            const double v = v0 + p.lambda * (v1 - v0), vx = (v1 - v0) / dx;
            const double f = fr[p.cell] + p.lambda * (fr[p.cell + 1] - fr[p.cell]);
            const double e = 2.0 * sth * pr.pot[q];
            double term = 0.0;
            if (pr.grad_w[q] != 0.0)
              term += exp_floor(pr.grad_pow * (ls + lt) + e) * pr.grad_w[q] * vx * vx;
            if (pr.zero_w[q] != 0.0) term += exp_floor(3.0 * (ls + lt) + e) * pr.zero_w[q] * v * v;
            l += wx * term;
            r += wx * exp_floor(2.0 * sth * pr.pot_f[q]) * f * f;
            if (pr.has_obs && pr.obs[q] != 0.0) o += wx * v * v;
          }
          double b = 0.0;
          for (const auto& bd : pr.bnd) {
            const double vx = bd.at_hi ? (3.0 * vr[Nx] - 4.0 * vr[Nx - 1] + vr[Nx - 2]) / (2.0 * dx)
                                       : (-3.0 * vr[0] + 4.0 * vr[1] - vr[2]) / (2.0 * dx);
            b += bd.coef * exp_floor(ls + lt + 2.0 * sth * bd.pot) * vx * vx;
          }
          lhs += W * l;
          rhs += W * (r + b + o);
        }
}

template <class MakeProfile>
InequalityReport run(const char* name, const std::vector<ManufacturedPair>& samples,
                     const CarlemanOptions& opt, MakeProfile make) {
  if (samples.empty()) throw ValidationError(std::string(name) + ": no samples");
  InequalityReport rep;
  rep.name = name;
  rep.sweep = opt.sweep;
  rep.grid = samples.front().grid;
  std::vector<Profile> profiles;
  profiles.reserve(samples.size());
  for (const auto& smp : samples) profiles.push_back(make(smp.grid));
  for (double s : opt.sweep) {
    if (!(s > 0.0)) throw ValidationError(std::string(name) + ": s must be positive");
    for (std::size_t m = 0; m < samples.size(); ++m) {
      double l, r;
      sides(samples[m], profiles[m], s, l, r);
      rep.add(static_cast<int>(m), s, l, r);
    }
  }
  rep.s_used = opt.sweep.empty() ? 0.0 : *std::max_element(opt.sweep.begin(), opt.sweep.end());
  if (opt.check_instability && !opt.sweep.empty()) {
    const double s2 = 2.0 * rep.s_used;
    double c2 = 0.0;
    for (std::size_t m = 0; m < samples.size(); ++m) {
      double l, r;
      sides(samples[m], profiles[m], s2, l, r);
      if (l == 0.0 && r == 0.0) continue;
      if (r <= 0.0) {
        c2 = std::numeric_limits<double>::infinity();
        break;
      }
      c2 = std::max(c2, l / r);
    }
    double c_top = 0.0;
    for (const auto& [sv, c] : rep.constant_by_s)
      if (sv == rep.s_used) c_top = c;
    rep.unstable = !std::isfinite(c2) || c2 > opt.instability_growth * std::max(c_top, 1e-300);
    if (c_top == 0.0 && c2 == 0.0) rep.unstable = false;
  }
  return rep;
}

}  // namespace

InequalityReport carleman_audit_deg0(const std::vector<ManufacturedPair>& samples,
                                     const DegenerateCoefficient& k, const CarlemanOptions& opt) {
  CarlemanWeights W(k, 1.0, 1.0, opt.kappa);
  const double pinf = W.p_inf();
  return run("carleman_deg0", samples, opt, [&](const Grid& g) {
    if (g.x_lo != 0.0 || g.x_hi != 1.0)
      throw ValidationError("carleman_deg0: samples must cover x in [0, 1]");
    Profile pr;
    for (const XPoint& p : x_points(g)) {
      const double x = p.x, d0 = p.d_lo, d1 = p.d_hi;
      const double kv = k.value(x, d0, d1);
      const double pot = W.p(x) - 2.0 * pinf;
      pr.pot.push_back(pot);
      pr.pot_f.push_back(pot);
      pr.grad_w.push_back(kv);
      pr.zero_w.push_back(x * x / kv);
    }
    pr.bnd.push_back({true, k.value(1.0, 1.0, 0.0), W.p(1.0) - 2.0 * pinf});
    return pr;
  });
}

InequalityReport carleman_audit_deg1(const std::vector<ManufacturedPair>& samples,
                                     const DegenerateCoefficient& k, const CarlemanOptions& opt) {
  CarlemanWeights W(k, 1.0, 1.0, opt.kappa);
  const double pbinf = W.p_bar_inf();
  return run("carleman_deg1", samples, opt, [&](const Grid& g) {
    if (g.x_lo != 0.0 || g.x_hi != 1.0)
      throw ValidationError("carleman_deg1: samples must cover x in [0, 1]");
    Profile pr;
    for (const XPoint& p : x_points(g)) {
      const double x = p.x, d0 = p.d_lo, d1 = p.d_hi;
      const double kv = k.value(x, d0, d1);
      const double pot = W.p_bar(x) - pbinf;
      pr.pot.push_back(pot);
      pr.pot_f.push_back(pot);
      pr.grad_w.push_back(kv);
      pr.zero_w.push_back(d1 * d1 / kv);
    }
    pr.bnd.push_back({false, k.value(0.0, 0.0, 1.0), W.p_bar(0.0) - pbinf});
    return pr;
  });
}

InequalityReport carleman_audit_nondeg(const std::vector<ManufacturedPair>& samples,
                                       const DegenerateCoefficient& k,
                                       const CarlemanOptions& opt) {
  if (samples.empty()) throw ValidationError("carleman_nondeg: no samples");
  const Grid& g0 = samples.front().grid;
  CarlemanWeights W(k, 1.0, 1.0, opt.kappa);
  W.set_nondegenerate(g0.x_lo, g0.x_hi, opt.frak_d);
  const double kap = W.kappa();
  return run("carleman_nondeg", samples, opt, [&](const Grid& g) {
    if (g.x_lo != g0.x_lo || g.x_hi != g0.x_hi)
      throw ValidationError("carleman_nondeg: samples must share one x interval");
    Profile pr;
    for (const XPoint& p : x_points(g)) {
      const double x = p.x;
      const double E = std::exp(kap * W.sigma(x));
      const double pot = W.Psi(x);
      pr.pot.push_back(pot);
      pr.pot_f.push_back(pot);
      pr.grad_w.push_back(E);
      pr.zero_w.push_back(E * E * E);
    }
    // -s kappa [k e^{2 s Phi} phi z_x^2]_b^c
    pr.bnd.push_back({true, -kap * k(g.x_hi) * std::exp(kap * W.sigma(g.x_hi)), W.Psi(g.x_hi)});
    pr.bnd.push_back({false, kap * k(g.x_lo) * std::exp(kap * W.sigma(g.x_lo)), W.Psi(g.x_lo)});
    return pr;
  });
}

InequalityReport carleman_local_audit(const std::vector<ManufacturedPair>& samples,
                                      const DegenerateCoefficient& k,
                                      std::pair<double, double> omega,
                                      const CarlemanOptions& opt) {
  if (!(omega.first > 0.0 && omega.first < omega.second && omega.second < 1.0))
    throw ValidationError("carleman_local: omega must be strictly inside (0, 1)");
  CarlemanWeights W(k, 1.0, 1.0, opt.kappa);
  const double pinf = W.p_inf();
  W.set_nondegenerate(omega.first, omega.second, opt.frak_d);
  return run("carleman_local", samples, opt, [&](const Grid& g) {
    if (g.x_lo != 0.0 || g.x_hi != 1.0)
      throw ValidationError("carleman_local: samples must cover x in [0, 1]");
    Profile pr;
    pr.has_obs = true;
    for (const XPoint& p : x_points(g)) {
      const double x = p.x, d0 = p.d_lo, d1 = p.d_hi;
      const double kv = k.value(x, d0, d1);
      pr.pot.push_back(W.p(x) - 2.0 * pinf);
      pr.pot_f.push_back(W.Psi(x));
      pr.grad_w.push_back(kv);
      pr.zero_w.push_back(x * x / kv);
      pr.obs.push_back(x > omega.first && x < omega.second ? 1.0 : 0.0);
    }
    return pr;
  });
}

InequalityReport caccioppoli_audit(const std::vector<ManufacturedPair>& samples,
                                   const DegenerateCoefficient& k,
                                   std::pair<double, double> omega_prime,
                                   std::pair<double, double> omega, double s, double kappa) {
  if (!(0.0 < omega.first && omega.first < omega_prime.first &&
        omega_prime.first < omega_prime.second && omega_prime.second < omega.second &&
        omega.second < 1.0))
    throw ValidationError("caccioppoli: need omega' compactly inside omega inside (0, 1)");
  CarlemanWeights W(k, 1.0, s, kappa);
  W.set_nondegenerate(omega.first, omega.second);
  CarlemanOptions opt;
  opt.sweep = {s};
  opt.kappa = kappa;
  opt.check_instability = false;
  return run("caccioppoli", samples, opt, [&](const Grid& g) {
    Profile pr;
    pr.has_obs = true;
    pr.grad_pow = 0.0;
    for (const XPoint& p : x_points(g)) {
      const double x = p.x;
      const bool in_prime = x > omega_prime.first && x < omega_prime.second;
      pr.pot.push_back(W.Psi(x));
      pr.pot_f.push_back(W.Psi(x));
      pr.grad_w.push_back(in_prime ? 1.0 : 0.0);
      pr.zero_w.push_back(0.0);
      pr.obs.push_back(x > omega.first && x < omega.second ? 1.0 : 0.0);
    }
    return pr;
  });
}

}  // namespace popctl
