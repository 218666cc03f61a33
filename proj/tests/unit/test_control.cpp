#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "popctl/control.hpp"
#include "popctl/error.hpp"

using namespace popctl;

namespace {

ProblemSpec degenerate_spec(std::uint64_t seed = 1) {
  ProblemSpec s;
  s.k = DegenerateCoefficient::power_law(0.5, 0.5);
  s.rates.beta = RateFunction::window(1.0, 0.5, 2.0);
  s.rates.mu = RateFunction::constant(0.2);
  s.rates.a_bar = 0.5;
  s.grid = Grid{1.0, 2.0, 12, 24, 12};
  s.y0 = random_final_data(s.grid, seed, 3, 1);
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace

TEST_CASE("conjugate gradient matches a direct solve") {
  // tridiagonal SPD matrix 4 -1
  const int n = 6;
  auto A = [&](std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < n; ++i) {
      y[i] = 4.0 * x[i];
      if (i > 0) y[i] -= x[i - 1];
      if (i + 1 < n) y[i] -= x[i + 1];
    }
  };
  std::vector<double> b{1, 2, 3, 4, 5, 6};
  auto r = conjugate_gradient(A, b, 1.0, 1e-14, 50);
  CHECK(r.converged);
  CHECK(r.iterations <= n + 1);
  std::vector<double> Ax(n);
  A(r.x, Ax);
  for (int i = 0; i < n; ++i) CHECK(Ax[i] == doctest::Approx(b[i]).epsilon(1e-12));
  for (std::size_t i = 1; i < r.log.size(); ++i)
    CHECK(r.log[i].functional <= r.log[i - 1].functional + 1e-14);
}

TEST_CASE("hum config validation") {
  Grid g{1.0, 2.0, 12, 24, 12};
  HUMConfig c;
  CHECK_NOTHROW(c.validate(g));
  c.delta = 1.0;
  CHECK_THROWS_AS(c.validate(g), ValidationError);
  c = HUMConfig{};
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(g), ValidationError);
}

TEST_CASE("zero initial state needs no control") {
  auto s = degenerate_spec();
  s.y0 = Field2(s.grid, 0.0);
  HUMConfig cfg;
  auto h = hum_control(s, cfg);
  CHECK(max_abs(h.f.values) == 0.0);
  CHECK(h.final_residual == 0.0);
  CHECK(h.bound_ratio == 0.0);
  auto d = compose_delay_control(s, cfg);
  CHECK(max_abs(d.f.values) == 0.0);
  CHECK(max_abs(d.y.state.values) == 0.0);
  auto gl = glue_two_sided(s, cfg, 0.15, 0.85);
  CHECK(max_abs(gl.f.values) == 0.0);
  CHECK(max_abs(gl.y.state.values) == 0.0);
}

TEST_CASE("hum is linear in the initial state") {
  auto s = degenerate_spec();
  HUMConfig cfg;
  cfg.cg_tol = 1e-12;
  cfg.cg_max_iter = 500;
  auto one = hum_control(s, cfg);
  auto s2 = s;
  for (double& e : s2.y0.values) e *= 2.0;
  auto two = hum_control(s2, cfg);
  double scale = max_abs(one.f.values);
  double dev = 0.0;
  for (std::size_t i = 0; i < one.f.values.size(); ++i)
    dev = std::max(dev, std::abs(two.f.values[i] - 2.0 * one.f.values[i]));
  CHECK(dev <= 1e-6 * scale);
  CHECK(two.J_star == doctest::Approx(4.0 * one.J_star).epsilon(1e-6));
  CHECK(one.final_residual <= one.certificate + 1e-12);
}

TEST_CASE("hum on the nondegenerate heat problem") {
  ProblemSpec s;
  s.k = DegenerateCoefficient::power_law(0.0, 0.0);
  s.rates.beta = RateFunction::constant(0.0);
  s.rates.mu = RateFunction::constant(0.0);
  s.rates.a_bar = 0.5;
  s.grid = Grid{1.0, 2.0, 24, 48, 24};
  s.omega = {0.3, 0.7};
  s.y0 = random_final_data(s.grid, 3, 4, 1);
  HUMConfig cfg;
  auto h = hum_control(s, cfg);
  CHECK(h.converged);
  CHECK(h.final_residual <= h.certificate);
  CHECK(h.final_residual <= 1e-2 * h.y0_norm);
}

TEST_CASE("delay with a_bar = T is plain hum") {
  auto s = degenerate_spec();
  s.rates.a_bar = 1.0;
  s.rates.beta = RateFunction::window(1.0, 1.0, 2.0);
  HUMConfig cfg;
  auto d = compose_delay_control(s, cfg);
  auto h = hum_control(s, cfg);
  CHECK(d.n_switch == 0);
  CHECK(d.t_switch == 0.0);
  CHECK(d.f.values == h.f.values);
  CHECK(d.final_residual == h.final_residual);
}

TEST_CASE("delay control vanishes during the free phase") {
  auto s = degenerate_spec();
  HUMConfig cfg;
  auto d = compose_delay_control(s, cfg);
  CHECK(d.n_switch == 6);
  for (int n = 0; n <= d.n_switch; ++n)
    for (double e : d.f.slice(n)) CHECK(e == 0.0);
  CHECK(d.final_residual <= d.certificate);
  CHECK(d.intermediate_norm <= d.intermediate_bound);
}

TEST_CASE("glue keeps the control inside omega") {
  auto s = degenerate_spec();
  HUMConfig cfg;
  auto gl = glue_two_sided(s, cfg, 0.15, 0.85);
  const Grid& g = s.grid;
  for (int n = 0; n <= g.Nt; ++n)
    for (int j = 0; j <= g.Na; ++j)
      for (int i = 0; i <= g.Nx; ++i)
        if (g.x(i) < s.omega.first - 1e-12 || g.x(i) > s.omega.second + 1e-12)
          CHECK(gl.f(n, j, i) == 0.0);
  CHECK(gl.residual_max <= gl.glue_tolerance);
  CHECK(gl.sub_certificates.size() == 2);
  CHECK_THROWS_AS(glue_two_sided(s, cfg, 0.4, 0.85), ValidationError);
}

TEST_CASE("control bound report") {
  auto s = degenerate_spec();
  HUMConfig cfg;
  auto a = hum_control(s, cfg);
  auto s3 = s;
  for (double& e : s3.y0.values) e *= 3.0;
  auto b = hum_control(s3, cfg);
  auto t = control_bound_report({a, b});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].bound_ratio == doctest::Approx(t.rows[1].bound_ratio).epsilon(1e-6));
  CHECK(t.finite);

  auto z = s;
  z.y0 = Field2(z.grid, 0.0);
  auto zero = control_bound_report({hum_control(z, cfg), hum_control(z, cfg)});
  CHECK(zero.rows.empty());

  // ensembles from two seeds agree within a factor 2
  auto ensemble = [&](std::uint64_t seed) {
    std::vector<ControlSolution> runs;
    for (int m = 0; m < 10; ++m) {
      auto sm = s;
      sm.y0 = random_final_data(sm.grid, seed, 3, 10 + m);
      runs.push_back(hum_control(sm, cfg));
    }
    return control_bound_report(runs);
  };
  auto e1 = ensemble(1), e2 = ensemble(2);
  CHECK(std::isfinite(e1.max_ratio));
  CHECK(e1.max_ratio <= 2.0 * e2.max_ratio);
  CHECK(e2.max_ratio <= 2.0 * e1.max_ratio);

  auto dir = std::filesystem::temp_directory_path() / "popctl_unit_ctl";
  std::filesystem::create_directories(dir);
  write_control_bound_csv(dir / "b.csv", t);
  write_control_csv(dir / "f.csv", a);
  write_control_summary(dir / "s.json", a, cfg);
  CHECK(std::filesystem::file_size(dir / "s.json") > 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("conjugate gradient stagnation") {
  // an indefinite operator is rejected outright
  auto neg = [](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
  };
  std::vector<double> b{1, 1};
  CHECK_THROWS_AS(conjugate_gradient(neg, b, 1.0, 1e-10, 10), NumericalError);

  // an operator with a noise floor: the residual stalls near 1e-9 while the
  // functional stops moving
  auto noisy = [](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = (1.0 + 1e-2 * static_cast<double>(i)) * x[i] + 1e-9 * std::sin(1e3 * x[i] + i);
  };
  std::vector<double> rhs(50, 1.0);
  auto r = conjugate_gradient(noisy, rhs, 1.0, 1e-15, 2000, 10);
  CHECK_FALSE(r.converged);
  CHECK(r.stagnated);
  CHECK(r.iterations < 2000);
  CHECK(r.rel_residual < 1e-6);
}
