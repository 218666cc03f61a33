#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"

namespace popctl {

namespace {

bool vanishes_at_one(HardyCase c) { return c == HardyCase::HP1 || c == HardyCase::HP1p; }
bool primed(HardyCase c) { return c == HardyCase::HP1p || c == HardyCase::HP2p; }

std::string case_name(HardyCase c) {
  switch (c) {
    case HardyCase::HP1: return "HP1";
    case HardyCase::HP1p: return "HP1'";
    case HardyCase::HP2: return "HP2";
    case HardyCase::HP2p: return "HP2'";
  }
  return "?";
}

}  // namespace

InequalityReport hardy_ratio(const DegenerateCoefficient& k, double theta, HardyCase c,
                             const std::vector<TestFunction>& ws) {
  InequalityReport rep;
  rep.name = "hardy " + case_name(c);
  if (primed(c) && theta != 1.0) rep.bound = 4.0 / ((1.0 - theta) * (1.0 - theta));
  int id = 0;
  for (const auto& w : ws) {
    const double end = vanishes_at_one(c) ? w.w(1.0, 1.0, 0.0) : w.w(0.0, 0.0, 1.0);
    if (std::abs(end) > 1e-12)
      throw ValidationError("hardy: test function '" + w.label + "' violates w(" +
                            (vanishes_at_one(c) ? "1" : "0") + ") = 0");
    const double lhs = integrate_singular(
        [&](double x, double d0, double d1) {
          const double r = w.w(x, d0, d1) / d1;
          return (k.value(x, d0, d1) * r) * r;
        },
        0.0, 1.0);
    const double rhs = integrate_singular(
        [&](double x, double d0, double d1) {
          const double dw = w.dw(x, d0, d1);
          return (k.value(x, d0, d1) * dw) * dw;
        },
        0.0, 1.0);
    rep.add(id++, 0.0, lhs, rhs);
  }
  return rep;
}

InequalityReport hardy_ratio_at_zero(const DegenerateCoefficient& k, double theta, HardyCase c,
                                     const std::vector<TestFunction>& ws) {
  std::vector<TestFunction> mirrored;
  mirrored.reserve(ws.size());
  for (const auto& w : ws) {
    TestFunction m;
    m.label = w.label;
    m.w = [f = w.w](double x, double d0, double d1) { return f(1.0 - x, d1, d0); };
    m.dw = [f = w.dw](double x, double d0, double d1) { return -f(1.0 - x, d1, d0); };
    mirrored.push_back(std::move(m));
  }
  InequalityReport rep = hardy_ratio(k.mirrored(), theta, c, mirrored);
  rep.name += " at 0";
  return rep;
}

std::vector<TestFunction> random_hardy_family(HardyCase c, double theta, int count,
                                              std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(c)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.02, 1.5);
  const double pi = std::numbers::pi;
  const bool at_one = vanishes_at_one(c);
  const double critical = (1.0 - theta) / 2.0;

  std::vector<TestFunction> out;
  for (int m = 0; m < count; ++m) {
    std::array<double, 4> cs{};
    for (double& v : cs) v = unit(rng);
    TestFunction f;
    if (m % 2 == 0) {
      f.label = "sine#" + std::to_string(m);
      if (at_one) {
        f.w = [cs, pi](double, double, double d1) {
          double s = 0.0;
          for (int n = 1; n <= 4; ++n) s += cs[n - 1] * std::sin(n * pi * d1 / 2.0);
          return s;
        };
        f.dw = [cs, pi](double, double, double d1) {
          double s = 0.0;
          for (int n = 1; n <= 4; ++n) s -= cs[n - 1] * (n * pi / 2.0) * std::cos(n * pi * d1 / 2.0);
          return s;
        };
      } else {
        f.w = [cs, pi](double, double d0, double) {
          double s = 0.0;
          for (int n = 1; n <= 4; ++n) s += cs[n - 1] * std::sin(n * pi * d0 / 2.0);
          return s;
        };
        f.dw = [cs, pi](double, double d0, double) {
          double s = 0.0;
          for (int n = 1; n <= 4; ++n) s += cs[n - 1] * (n * pi / 2.0) * std::cos(n * pi * d0 / 2.0);
          return s;
        };
      }
    } else {
      // g = 1 + 0.3 sum c_n cos(n pi x) stays in [0.1, 1.9].
      auto g = [cs, pi](double x) {
        double s = 1.0;
        for (int n = 1; n <= 3; ++n) s += 0.3 * cs[n - 1] * std::cos(n * pi * x);
        return s;
      };
      auto dg = [cs, pi](double x) {
        double s = 0.0;
        for (int n = 1; n <= 3; ++n) s -= 0.3 * cs[n - 1] * n * pi * std::sin(n * pi * x);
        return s;
      };
      const double lo = at_one ? std::max(critical, 0.0) : critical;
      const double gamma = lo + gap(rng);
      f.label = "power#" + std::to_string(m) + " gamma=" + std::to_string(gamma);
      if (at_one) {
        f.w = [g, gamma](double x, double, double d1) { return std::pow(d1, gamma) * g(x); };
        f.dw = [g, dg, gamma](double x, double, double d1) {
          return -gamma * std::pow(d1, gamma - 1.0) * g(x) + std::pow(d1, gamma) * dg(x);
        };
      } else {
        f.w = [g, gamma](double x, double d0, double d1) {
          return d0 * std::pow(d1, gamma) * g(x);
        };
        f.dw = [g, dg, gamma](double x, double d0, double d1) {
          const double p = std::pow(d1, gamma);
          return p * g(x) + d0 * (-gamma * std::pow(d1, gamma - 1.0) * g(x) + p * dg(x));
        };
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace popctl
