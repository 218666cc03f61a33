#include <doctest.h>

#include <cmath>
#include <limits>

#include "popctl/coeffs.hpp"
#include "popctl/error.hpp"

using namespace popctl;

TEST_CASE("endpoint classification") {
  auto d = classify_degeneracy(DegenerateCoefficient::power_law(0.5, 0.0));
  CHECK(d.at0 == EndpointClass::weak);
  CHECK(d.at1 == EndpointClass::nondegenerate);
  CHECK(d.M1 == doctest::Approx(0.5));

  auto s = classify_degeneracy(DegenerateCoefficient::power_law(1.5, 1.2));
  CHECK(s.at0 == EndpointClass::strong);
  CHECK(s.at1 == EndpointClass::strong);
  CHECK(s.M1 == doctest::Approx(1.5));
  CHECK(s.M2 == doctest::Approx(1.2));
  REQUIRE(s.theta0.has_value());
  CHECK(*s.theta0 == doctest::Approx(1.5));

  CHECK_THROWS_AS(classify_degeneracy(DegenerateCoefficient::power_law(2.0, 0.0)),
                  ValidationError);

  // tabulated x^{1/2}(1-x)^{1/2}
  std::vector<double> tab(201);
  for (std::size_t i = 0; i < tab.size(); ++i) {
    double x = static_cast<double>(i) / 200.0;
    tab[i] = std::sqrt(x * (1.0 - x));
  }
  auto k = DegenerateCoefficient::tabulated(tab);
  CHECK(k.zero_at0());
  CHECK(k.zero_at1());
  CHECK(k(0.5) == doctest::Approx(0.5));
}

TEST_CASE("coefficient evaluation and mirror") {
  auto k = DegenerateCoefficient::power_law(0.5, 1.5);
  CHECK(k(0.25) == doctest::Approx(std::sqrt(0.25) * std::pow(0.75, 1.5)));
  auto m = k.mirrored();
  for (double x : {0.1, 0.3, 0.77}) CHECK(m(x) == doctest::Approx(k(1.0 - x)));
  double h = 1e-6;
  CHECK(k.derivative(0.4) == doctest::Approx((k(0.4 + h) - k(0.4 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("theta") {
  CHECK(eval_theta(0.5, 1.0, 1.0) == doctest::Approx(256.0));
  CHECK(eval_theta(0.5, 0.5, 1.0) == doctest::Approx(4096.0));
  CHECK(eval_theta(0.0, 1.0, 1.0) == std::numeric_limits<double>::infinity());
  CHECK(eval_theta(1.0, 1.0, 1.0) == std::numeric_limits<double>::infinity());
  CHECK(eval_theta(0.5, 0.0, 1.0) == std::numeric_limits<double>::infinity());
  CHECK(exp_floor(-1e6) == 0.0);
  CHECK(exp_floor(0.0) == 1.0);
}

TEST_CASE("weight primitives") {
  CarlemanWeights w(DegenerateCoefficient::power_law(1.0, 0.0), 1.0, 1.0);
  // p = int_0^x y / y dy = x
  CHECK(w.p(0.3) == doctest::Approx(0.3));
  CHECK(w.p(1.0) == doctest::Approx(1.0));
  CHECK(w.p_inf() == doctest::Approx(1.0));

  auto near0 = eval_weights(w, 1e-3, 1.0, 0.5);
  CHECK(near0.exp2s_phi == 0.0);
  auto mid = eval_weights(w, 0.5, 2.0, 0.5);
  CHECK(mid.phi < 0.0);
  CHECK(mid.exp2s_phi > 0.0);
  CHECK(mid.exp2s_phi < 1.0);

  w.set_s(0.0);
  CHECK(eval_weights(w, 0.5, 1.0, 0.5).exp2s_phi == 1.0);
}

TEST_CASE("nondegenerate weight") {
  CarlemanWeights w(DegenerateCoefficient::power_law(0.5, 0.0), 1.0, 1.0);
  CHECK_FALSE(w.has_sigma());
  w.set_nondegenerate(0.3, 1.0);
  CHECK(w.has_sigma());
  CHECK(w.sigma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w.sigma(0.3) > w.sigma(0.6));

  CarlemanWeights flat(DegenerateCoefficient::power_law(0.0, 0.0), 1.0, 1.0);
  CHECK_THROWS_AS(flat.set_nondegenerate(0.2, 0.8), ValidationError);
  CHECK_NOTHROW(flat.set_nondegenerate(0.2, 0.8, 1.0));
}

TEST_CASE("hypotheses") {
  auto k = DegenerateCoefficient::power_law(0.5, 0.5);
  VitalRates r;
  r.beta = RateFunction::window(1.0, 1.0, 2.0);
  r.mu = RateFunction::constant(0.2);
  r.a_bar = 1.0;
  auto ok = validate_hypotheses(k, r, 1.0, 2.0, {0.3, 0.6}, 1.5);
  CHECK_MESSAGE(ok.all_pass(), ok.summary());

  auto at_T = validate_hypotheses(k, r, 1.0, 2.0, {0.3, 0.6}, 1.0);
  CHECK_FALSE(at_T.all_pass());
  bool found = false;
  for (const auto& c : at_T.checks)
    if (c.name == "delta in (T, A)") found = !c.pass;
  CHECK(found);

  VitalRates young = r;
  young.beta = RateFunction::constant(1.0);
  auto fert = validate_hypotheses(k, young, 1.0, 2.0, {0.3, 0.6}, 1.5);
  CHECK_FALSE(fert.all_pass());
  found = false;
  for (const auto& c : fert.checks)
    if (c.name.starts_with("fertility window")) found = !c.pass && !c.detail.empty();
  CHECK(found);

  auto bad_omega = validate_hypotheses(k, r, 1.0, 2.0, {0.0, 0.6}, 1.5);
  CHECK_FALSE(bad_omega.all_pass());
}

TEST_CASE("rate families") {
  auto w = RateFunction::window(2.0, 0.5, 1.0);
  CHECK(w(0, 0.5, 0.3) == 0.0);
  CHECK(w(0, 0.75, 0.3) == 2.0);
  CHECK(w(0, 1.5, 0.3) == 0.0);
  auto t = RateFunction::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
  CHECK(t(0, 1.5, 0.0) == doctest::Approx(2.0));
  auto g = RateFunction::gaussian_bump(1.0, 1.0, 0.2);
  CHECK(g(0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(g(0, 1.2, 0.0) < 1.0);
  CHECK(RateFunction::constant(1.0).space_independent());
  auto sp = RateFunction::constant(1.0);
  sp.spatial_amplitude = 0.5;
  CHECK_FALSE(sp.space_independent());
}
