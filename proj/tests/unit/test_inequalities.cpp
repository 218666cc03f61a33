#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"

using namespace popctl;

namespace {

TestFunction tf(std::string label, std::function<double(double, double, double)> w,
                std::function<double(double, double, double)> dw) {
  return {std::move(label), std::move(w), std::move(dw)};
}

VitalRates plain_rates(double mu = 0.0) {
  VitalRates r;
  r.beta = RateFunction::constant(0.0);
  r.mu = RateFunction::constant(mu);
  return r;
}

std::vector<ManufacturedPair> zero_sample(const DegenerateCoefficient& k, const Grid& g) {
  return {manufactured_adjoint(k, plain_rates(), g, [](double, double, double) { return 0.0; })};
}

}  // namespace

TEST_CASE("hardy closed forms") {
  auto one_minus_x = tf("1-x", [](double, double, double d1) { return d1; },
                        [](double, double, double) { return -1.0; });
  auto r1 = hardy_ratio(DegenerateCoefficient::power_law(0.0, 0.5), 0.5, HardyCase::HP1p,
                        {one_minus_x});
  REQUIRE(r1.counted() == 1);
  CHECK(r1.samples[0].lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(r1.samples[0].rhs == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(r1.empirical_constant == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(r1.bound.has_value());
  CHECK(*r1.bound == doctest::Approx(16.0));
  CHECK(r1.bound_holds);

  auto x = tf("x", [](double x, double, double) { return x; },
              [](double, double, double) { return 1.0; });
  auto r2 = hardy_ratio(DegenerateCoefficient::power_law(0.0, 1.5), 1.5, HardyCase::HP2p, {x});
  CHECK(r2.samples[0].lhs == doctest::Approx(16.0 / 15.0).epsilon(1e-9));
  CHECK(r2.samples[0].rhs == doctest::Approx(2.0 / 5.0).epsilon(1e-10));
  CHECK(r2.empirical_constant == doctest::Approx(8.0 / 3.0).epsilon(1e-9));

  // mirror: k = x^{1/2}, w = x
  auto r3 = hardy_ratio_at_zero(DegenerateCoefficient::power_law(0.5, 0.0), 0.5, HardyCase::HP1p,
                                {x});
  CHECK(r3.empirical_constant == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hardy excludes zero and rejects bad test functions") {
  auto zero = tf("0", [](double, double, double) { return 0.0; },
                 [](double, double, double) { return 0.0; });
  auto k = DegenerateCoefficient::power_law(0.0, 0.5);
  auto r = hardy_ratio(k, 0.5, HardyCase::HP1p, {zero});
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].excluded);
  CHECK(r.counted() == 0);
  auto r0 = hardy_ratio_at_zero(DegenerateCoefficient::power_law(0.5, 0.0), 0.5, HardyCase::HP1p,
                                {zero});
  CHECK(r0.counted() == 0);

  auto one = tf("1", [](double, double, double) { return 1.0; },
                [](double, double, double) { return 0.0; });
  CHECK_THROWS_AS(hardy_ratio(k, 0.5, HardyCase::HP1p, {one}), ValidationError);
}

TEST_CASE("hardy random family respects the explicit constant") {
  auto k = DegenerateCoefficient::power_law(0.0, 0.5);
  auto fam = random_hardy_family(HardyCase::HP1p, 0.5, 40, 9);
  CHECK(fam.size() == 40);
  auto r = hardy_ratio(k, 0.5, HardyCase::HP1p, fam);
  CHECK(r.counted() == 40);
  CHECK(r.bound_holds);
  CHECK(r.empirical_constant <= 16.0);
}

TEST_CASE("manufactured source") {
  Grid g{1.0, 2.0, 8, 16, 16};
  auto k = DegenerateCoefficient::power_law(1.0, 0.0);
  auto z = manufactured_adjoint(k, plain_rates(), g, [](double, double, double) { return 0.0; });
  for (double e : z.f.values) CHECK(e == 0.0);

  // the face-flux stencil is exact for this v; the extrapolated x-end rows
  // carry O(dx^2)
  auto errors = [&](int N) {
    Grid h{1.0, 2.0, N / 2, N, N};
    const double T = h.T;
    auto p = manufactured_adjoint(k, plain_rates(), h, [&](double t, double a, double x) {
      return (T - t) * a * x * (1.0 - x);
    });
    double inner = 0.0, edge = 0.0;
    for (int n = 0; n <= h.Nt; ++n)
      for (int j = 0; j <= h.Na; ++j)
        for (int i = 0; i <= h.Nx; ++i) {
          double t = h.t(n), a = h.a(j), x = h.x(i);
          double ex = -a * x * (1 - x) + (T - t) * x * (1 - x) + (T - t) * a * (1 - 4 * x);
          double e = std::abs(p.f(n, j, i) - ex);
          double& slot = (i == 0 || i == h.Nx) ? edge : inner;
          slot = std::max(slot, e);
        }
    return std::pair{inner, edge};
  };
  auto [in16, edge16] = errors(16);
  auto [in32, edge32] = errors(32);
  CHECK(in16 < 1e-10);
  CHECK(in32 < 1e-10);
  CHECK(edge16 <= 8.0 / (16.0 * 16.0));
  CHECK(edge32 < 0.3 * edge16);

  CHECK_THROWS_AS(manufactured_adjoint(k, plain_rates(), g,
                                       [](double, double, double) { return 1.0; }),
                  ValidationError);

  auto fam = manufactured_family(DegenerateCoefficient::power_law(0.5, 0.5), plain_rates(0.1), g,
                                 3, 5);
  CHECK(fam.size() == 3);
  auto again = manufactured_family(DegenerateCoefficient::power_law(0.5, 0.5), plain_rates(0.1),
                                   g, 3, 5);
  CHECK(fam[1].v.values == again[1].v.values);
}

TEST_CASE("carleman audits on zero and degenerate inputs") {
  Grid g = Grid::cube(2.0, 8);
  auto k = DegenerateCoefficient::power_law(0.5, 0.0);
  CarlemanOptions opt;
  opt.sweep = {5, 10, 20};

  auto r = carleman_audit_deg0(zero_sample(k, g), k, opt);
  for (const auto& s : r.samples) {
    CHECK(s.lhs == 0.0);
    CHECK(s.rhs == 0.0);
    CHECK(s.excluded);
  }
  CHECK(r.empirical_constant == 0.0);
  CHECK_FALSE(r.unstable);
  CHECK_THROWS_AS(carleman_audit_deg0({}, k, opt), ValidationError);

  // k = 1 has sup |k'| = 0: no usable nondegenerate weight
  auto flat = DegenerateCoefficient::power_law(0.0, 0.0);
  auto fam = manufactured_family(flat, plain_rates(), g, 1, 2);
  CHECK_THROWS_AS(carleman_audit_nondeg(fam, flat, opt), ValidationError);
  opt.frak_d = 1.0;
  CHECK_NOTHROW(carleman_audit_nondeg(fam, flat, opt));
}

TEST_CASE("nondegenerate audit on a subinterval") {
  Grid g = Grid::cube(2.0, 12);
  g.x_lo = 0.3;
  auto k = DegenerateCoefficient::power_law(0.5, 0.0);
  auto fam = manufactured_family(k, plain_rates(), g, 2, 3);
  CarlemanOptions opt;
  opt.sweep = {5, 10, 20};
  auto r = carleman_audit_nondeg(fam, k, opt);
  CHECK(std::isfinite(r.empirical_constant));
  CHECK(r.empirical_constant > 0.0);
  CHECK_FALSE(r.violation);

  Grid full = Grid::cube(2.0, 12);
  auto deg = manufactured_family(k, plain_rates(), full, 1, 3);
  CHECK_THROWS_AS(carleman_audit_nondeg(deg, k, opt), ValidationError);
}

TEST_CASE("local audit and caccioppoli") {
  Grid g = Grid::cube(2.0, 12);
  auto k = DegenerateCoefficient::power_law(0.5, 0.5);
  auto fam = manufactured_family(k, plain_rates(0.1), g, 2, 4);
  CarlemanOptions opt;
  opt.sweep = {5, 10};
  CHECK_THROWS_AS(carleman_local_audit(fam, k, {0.0, 0.5}, opt), ValidationError);
  auto loc = carleman_local_audit(fam, k, {0.3, 0.7}, opt);
  CHECK(std::isfinite(loc.empirical_constant));
  CHECK_FALSE(loc.violation);
  auto lz = carleman_local_audit(zero_sample(k, g), k, {0.3, 0.7}, opt);
  CHECK(lz.empirical_constant == 0.0);

  CHECK_THROWS_AS(caccioppoli_audit(fam, k, {0.2, 0.5}, {0.3, 0.7}, 1.0), ValidationError);
  CHECK_THROWS_AS(caccioppoli_audit(fam, k, {0.4, 0.6}, {0.0, 0.7}, 1.0), ValidationError);
  auto wide = caccioppoli_audit(fam, k, {0.35, 0.65}, {0.3, 0.7}, 1.0);
  auto narrow = caccioppoli_audit(fam, k, {0.45, 0.55}, {0.3, 0.7}, 1.0);
  CHECK(std::isfinite(wide.empirical_constant));
  for (std::size_t m = 0; m < wide.samples.size(); ++m) {
    CHECK(narrow.samples[m].lhs <= wide.samples[m].lhs);
    CHECK(narrow.samples[m].rhs == doctest::Approx(wide.samples[m].rhs));
  }
}

TEST_CASE("cut-off family") {
  CutoffFamily c(0.3, 0.6);
  CHECK(c.m_lo() == doctest::Approx(0.4));
  CHECK(c.m_hi() == doctest::Approx(0.5));
  for (int i = 0; i <= 100; ++i) {
    double x = i / 100.0;
    CHECK(c.xi(x).v + c.eta(x).v + c.phi(x).v == doctest::Approx(1.0));
    CHECK(c.xi(x).v + c.eta_complement(x).v == doctest::Approx(1.0));
    if (x <= c.alpha() || x >= c.rho()) {
      CHECK(c.xi(x).d1 == 0.0);
      CHECK(c.eta(x).d1 == 0.0);
      CHECK(c.tau(x).d1 == 0.0);
    }
    if (x <= c.m_lo()) CHECK(c.xi(x).v == 1.0);
    if (x >= c.m_mid()) CHECK(c.xi(x).v == 0.0);
    if (x >= c.m_lo() && x <= c.m_hi()) CHECK(c.tau(x).v == 1.0);
    if (x <= c.alpha_tilde() || x >= c.rho_tilde()) CHECK(c.tau(x).v == 0.0);
  }
  CHECK(smoothstep(0.5).v == doctest::Approx(0.5));
  CHECK(smoothstep(-1.0).v == 0.0);
  CHECK(smoothstep(2.0).v == 1.0);
}

TEST_CASE("observability") {
  ProblemSpec s;
  s.k = DegenerateCoefficient::power_law(0.5, 0.5);
  s.rates.beta = RateFunction::window(1.0, 0.5, 2.0);
  s.rates.mu = RateFunction::constant(0.2);
  s.grid = Grid{1.0, 2.0, 12, 24, 12};
  s.y0 = Field2(s.grid, 0.0);

  CHECK_THROWS_AS(observability_ratio(s, {}, 1.25), ValidationError);
  auto z = observability_ratio(s, {Field2(s.grid, 0.0)}, 1.25);
  REQUIRE(z.samples.size() == 1);
  CHECK(z.samples[0].excluded);

  std::vector<Field2> ens;
  for (int m = 0; m < 4; ++m) ens.push_back(random_final_data(s.grid, 7, 3, 100 + m));
  auto r = observability_ratio(s, ens, 1.25);
  CHECK(r.counted() == 4);
  CHECK(std::isfinite(r.empirical_constant));
  auto wi = observability_ratio(s, ens, 1.25, ObservabilityMode::with_interior);
  CHECK(wi.empirical_constant <= r.empirical_constant * (1 + 1e-12));
  CHECK_THROWS_AS(observability_ratio(s, ens, 1.25, ObservabilityMode::zero_near_0),
                  ValidationError);
}

TEST_CASE("report files") {
  InequalityReport r;
  r.name = "t";
  r.add(0, 1.0, 2.0, 1.0);
  r.add(1, 1.0, 0.0, 0.0);
  r.add(2, 1.0, 1.0, 0.0);
  CHECK(r.counted() == 1);
  CHECK(r.violation);
  CHECK(r.empirical_constant == 2.0);
  auto dir = std::filesystem::temp_directory_path() / "popctl_unit_rep";
  std::filesystem::create_directories(dir);
  r.write_csv(dir / "r.csv");
  r.write_json(dir / "r.json");
  CHECK(std::filesystem::file_size(dir / "r.csv") > 0);
  std::filesystem::remove_all(dir);
}
