#include <doctest.h>

#include <cmath>
#include <numbers>

#include "popctl/error.hpp"
#include "popctl/solver.hpp"

using namespace popctl;
using std::numbers::pi;

namespace {

ProblemSpec base_spec(int N = 12) {
  ProblemSpec s;
  s.k = DegenerateCoefficient::power_law(0.5, 0.5);
  s.rates.beta = RateFunction::window(1.0, 0.5, 2.0);
  s.rates.mu = RateFunction::constant(0.2);
  s.grid = Grid{1.0, 2.0, N, 2 * N, N};
  s.y0 = random_final_data(s.grid, 11, 3);
  return s;
}

double slice_inner(const ProblemSpec& s, std::span<const double> a, std::span<const double> b) {
  return StepOperator(s).inner(a, b);
}

}  // namespace

TEST_CASE("zero data gives zero") {
  auto s = base_spec();
  s.y0 = Field2(s.grid, 0.0);
  auto y = solve_forward(s);
  for (double e : y.state.values) CHECK(e == 0.0);
  auto v = solve_adjoint(s, Field2(s.grid, 0.0));
  for (double e : v.v.state.values) CHECK(e == 0.0);
}

TEST_CASE("dirichlet rows and renewal") {
  auto s = base_spec();
  auto y = solve_forward(s);
  Field3 zero(s.grid, 0.0);
  auto r = discrete_residual(s, y.state, zero);
  CHECK(r.dirichlet == 0.0);
  CHECK(r.renewal < 1e-14);
  CHECK(r.max < 1e-12);
}

TEST_CASE("duality with control and prescribed adjoint source") {
  auto s = base_spec(10);
  const Grid& g = s.grid;
  Field3 f = sample(g, [](double t, double a, double x) { return std::cos(3 * t + a) * x; });
  Field3 h = sample(g, [](double t, double a, double x) { return std::sin(t - a) + x; });
  Field2 vT = random_final_data(g, 5, 3);
  auto y = solve_forward(s, &f);
  auto adj = solve_adjoint(s, vT, &h);
  Field3 fm = mask_to_omega(s, f);

  // each step adds dt <chi f, q> and dt <y, g> over age levels >= 1
  double lhs = slice_inner(s, y.state.slice(g.Nt), vT.values) -
               slice_inner(s, s.y0.values, adj.v.state.slice(0));
  double rhs = 0.0;
  Field3 h1 = h;
  for (int n = 0; n <= g.Nt; ++n)
    for (int i = 0; i <= g.Nx; ++i) h1(n, 0, i) = 0.0;
  for (int n = 1; n <= g.Nt; ++n)
    rhs += g.dt() * (slice_inner(s, fm.slice(n), adj.q.slice(n)) +
                     slice_inner(s, y.state.slice(n), h1.slice(n)));
  double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
  CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
}

TEST_CASE("adjoint rejects data at the maximal age") {
  auto s = base_spec();
  Field2 vT(s.grid, 0.0);
  vT(s.grid.Na, s.grid.Nx / 2) = 1.0;
  CHECK_THROWS_AS(solve_adjoint(s, vT), ValidationError);
}

TEST_CASE("mass decay without births") {
  auto s = base_spec(16);
  s.rates.beta = RateFunction::constant(0.0);
  auto y = solve_forward(s);
  auto e = energy_audit(y, s);
  CHECK(e.nonincreasing);
  CHECK(e.pass);
  CHECK(e.C == doctest::Approx(2.0));
}

TEST_CASE("separated heat solution transported in age") {
  auto err = [](int N) {
    ProblemSpec s;
    s.k = DegenerateCoefficient::power_law(0.0, 0.0);
    s.rates.beta = RateFunction::constant(0.0);
    s.rates.mu = RateFunction::constant(0.0);
    s.grid = Grid{0.5, 2.0, N, 4 * N, 4 * N};
    auto bump = [](double a) {
      return (a > 0.2 && a < 1.2) ? std::pow(std::sin(pi * (a - 0.2)), 2) : 0.0;
    };
    s.y0 = sample(s.grid, [&](double a, double x) { return bump(a) * std::sin(pi * x); });
    auto y = solve_forward(s);
    const Grid& g = s.grid;
    double e = 0.0;
    for (int j = 0; j <= g.Na; ++j)
      for (int i = 0; i <= g.Nx; ++i) {
        double ex = std::exp(-pi * pi * g.T) * bump(g.a(j) - g.T) * std::sin(pi * g.x(i));
        e = std::max(e, std::abs(y.state(g.Nt, j, i) - ex));
      }
    return e;
  };
  double e1 = err(16), e2 = err(32);
  CHECK(e1 < 0.02);
  CHECK(e2 < 0.6 * e1);
}

TEST_CASE("characteristic gamma") {
  CHECK(characteristic_gamma(0.0, 0.0, 0.0, 1.0, 2.0) == 1.0);  // A - a + t - T~ = 2
  CHECK(characteristic_gamma(0.5, 2.0, 0.5, 1.0, 2.0) == 0.0);
  CHECK(characteristic_gamma(0.0, 1.5, 0.0, 0.5, 2.0) == 0.5);
}

TEST_CASE("characteristic consistency") {
  ProblemSpec s;
  s.k = DegenerateCoefficient::power_law(0.0, 0.0);
  s.rates.beta = RateFunction::constant(0.0);
  s.rates.mu = RateFunction::constant(0.0);
  s.grid = Grid{1.0, 2.0, 16, 32, 16};
  s.y0 = Field2(s.grid, 0.0);

  auto zero = characteristic_consistency(s, Field2(s.grid, 0.0));
  CHECK(zero.max_absolute == 0.0);

  Field2 vT = sample(s.grid, [](double a, double x) {
    return (2.0 - a) * std::sin(pi * x) * (1.0 + 0.3 * std::cos(a));
  });
  auto at_T = characteristic_consistency(s, vT, {{s.grid.Nt, 5}, {s.grid.Nt, 20}});
  CHECK(at_T.max_absolute < 1e-14);

  // first order in dt: the absolute defect halves under refinement
  auto defect = [](int N) {
    ProblemSpec r;
    r.k = DegenerateCoefficient::power_law(0.0, 0.0);
    r.rates.beta = RateFunction::constant(0.0);
    r.rates.mu = RateFunction::constant(0.0);
    r.grid = Grid{1.0, 2.0, N, 2 * N, N};
    r.y0 = Field2(r.grid, 0.0);
    Field2 v = sample(r.grid, [](double a, double x) {
      return (2.0 - a) * std::sin(pi * x) * (1.0 + 0.3 * std::cos(a));
    });
    auto d = characteristic_consistency(r, v);
    CHECK_FALSE(d.samples.empty());
    return d.max_absolute;
  };
  double d16 = defect(16), d32 = defect(32);
  CHECK(d16 < 0.05);
  CHECK(d32 < 0.6 * d16);
}
