#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "popctl/discretize.hpp"
#include "popctl/error.hpp"

using namespace popctl;
namespace fs = std::filesystem;

TEST_CASE("grid validation") {
  Grid g;
  CHECK_NOTHROW(g.validate());
  CHECK(g.dt() == doctest::Approx(g.da()));

  Grid bad = g;
  bad.Nx = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = g;
  bad.A = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = g;
  bad.Na = 40;  // dt != da
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.dt_equals_da = false;
  CHECK_NOTHROW(bad.validate());

  Grid c = Grid::cube(2.0, 16);
  CHECK(c.T == 2.0);
  CHECK(c.A == 2.0);
  CHECK(c.dt() == doctest::Approx(c.da()));
}

TEST_CASE("trapezoid weights") {
  auto w = trapezoid_weights(4, 0.5);
  REQUIRE(w.size() == 5);
  CHECK(w[0] == 0.25);
  CHECK(w[1] == 0.5);
  CHECK(w[4] == 0.25);
  double sum = 0.0;
  for (double e : w) sum += e;
  CHECK(sum == doctest::Approx(2.0));
}

TEST_CASE("weighted norm") {
  Grid g{1.0, 1.0, 20, 20, 20};
  CHECK(weighted_norm(Field2(g, 0.0), g) == 0.0);
  CHECK(weighted_norm(Field2(g, 1.0), g) == doctest::Approx(1.0).epsilon(1e-14));

  auto err = [](int N) {
    Grid h{1.0, 1.0, N, N, N};
    Field2 s = sample(h, [](double, double x) { return std::sin(std::numbers::pi * x); });
    return std::abs(weighted_norm(s, h) - 0.5);
  };
  // the trapezoid rule is exact for sin^2 on a full period, so only check size
  CHECK(err(8) < 1.0 / 64.0);
  CHECK(err(16) < 1.0 / 256.0);

  // a singular weight needs the midpoint option at the endpoints
  Field2 f = sample(g, [](double, double x) { return x * (1.0 - x); });
  WeightSpec sing{[](double, double x) { return 1.0 / (x * x); }, false};
  CHECK_THROWS_AS(weighted_norm(f, g, sing), ValidationError);
  sing.midpoint_at_endpoints = true;
  // int (1-x)^2 dx = 1/3; the endpoint cell is first order
  auto serr = [&](int N) {
    Grid h{1.0, 1.0, N, N, N};
    Field2 fh = sample(h, [](double, double x) { return x * (1.0 - x); });
    return std::abs(weighted_norm(fh, h, sing) - 1.0 / 3.0);
  };
  CHECK(serr(20) < 1.0 / 20.0);
  CHECK(serr(40) < 0.6 * serr(20));
}

TEST_CASE("singular integrals") {
  // int_0^1 x^{-1/2} = 2
  double v = integrate_singular([](double, double d0, double) { return 1.0 / std::sqrt(d0); },
                                0.0, 1.0);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  // int_0^1 (1-x)^{-1/2} uses the distance to the upper end
  double u = integrate_singular([](double, double, double d1) { return 1.0 / std::sqrt(d1); },
                                0.0, 1.0);
  CHECK(u == doctest::Approx(2.0).epsilon(1e-10));
  double p = integrate_singular([](double x, double, double) { return x * x; }, 0.0, 3.0);
  CHECK(p == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("random final data") {
  Grid g{1.0, 2.0, 12, 24, 20};
  Field2 a = random_final_data(g, 42, 4);
  Field2 b = random_final_data(g, 42, 4);
  CHECK(a.values == b.values);
  CHECK(random_final_data(g, 42, 4, 1).values != a.values);
  CHECK(random_final_data(g, 43, 4).values != a.values);
  for (int i = 0; i <= g.Nx; ++i) CHECK(a(g.Na, i) == 0.0);
  for (int j = 0; j <= g.Na; ++j) {
    CHECK(a(j, 0) == 0.0);
    CHECK(std::abs(a(j, g.Nx)) < 1e-14);
  }

  double one = 1.0;
  Field2 s = series_final_data(g, 1, std::span<const double>(&one, 1));
  double mx = 0.0;
  for (double e : s.values) mx = std::max(mx, std::abs(e));
  CHECK(mx <= 1.0);
  CHECK(mx > 0.9);
}

TEST_CASE("snapshot round trip") {
  Grid g{1.0, 2.0, 3, 6, 4};
  Field3 f = sample(g, [](double t, double a, double x) { return t + 10 * a + 100 * x; });
  fs::path dir = fs::temp_directory_path() / "popctl_unit_snap";
  fs::create_directories(dir);

  write_binary(dir / "f.bin", f);
  CHECK(fs::file_size(dir / "f.bin") == 16 + 8 * f.values.size());
  Field3 r = read_binary(dir / "f.bin");
  CHECK(r.Nt == 3);
  CHECK(r.Na == 6);
  CHECK(r.Nx == 4);
  CHECK(r.values == f.values);

  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "xx";
  }
  CHECK_THROWS(read_binary(dir / "bad.bin"));

  write_csv(dir / "f.csv", f, g);
  std::ifstream in(dir / "f.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,a,x,value");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(f.values.size()));
  fs::remove_all(dir);
}
