#include <algorithm>
#include <cmath>
#include <numbers>

#include "popctl/coeffs.hpp"
#include "popctl/error.hpp"

namespace popctl {

RateFunction RateFunction::constant(double v) {
  RateFunction r;
  r.family = Family::constant;
  r.value = v;
  return r;
}

RateFunction RateFunction::window(double v, double lo, double hi) {
  RateFunction r;
  r.family = Family::window;
  r.value = v;
  r.lo = lo;
  r.hi = hi;
  return r;
}

RateFunction RateFunction::gaussian_bump(double peak, double center, double width, double lo) {
  if (!(width > 0.0)) throw ValidationError("rate: gaussian width must be positive");
  RateFunction r;
  r.family = Family::gaussian_bump;
  r.value = peak;
  r.center = center;
  r.width = width;
  r.lo = lo;
  return r;
}

RateFunction RateFunction::tabulated(std::vector<double> ages, std::vector<double> values) {
  if (ages.size() < 2 || ages.size() != values.size())
    throw ValidationError("rate: table needs >= 2 (age, value) pairs of equal length");
  if (!std::is_sorted(ages.begin(), ages.end()))
    throw ValidationError("rate: table ages must be increasing");
  RateFunction r;
  r.family = Family::table;
  r.ages = std::move(ages);
  r.table = std::move(values);
  return r;
}

RateFunction RateFunction::custom(std::function<double(double, double, double)> fn,
                                  bool space_independent) {
  RateFunction r;
  r.family = Family::custom;
  r.fn = std::move(fn);
  r.custom_space_independent_ = space_independent;
  return r;
}

double RateFunction::operator()(double t, double a, double x) const {
  if (family == Family::custom) return fn(t, a, x);
  if (!(a > lo) || a > hi) return 0.0;
  double v = 0.0;
  switch (family) {
    case Family::constant:
    case Family::window:
      v = value;
      break;
    case Family::gaussian_bump: {
      const double z = (a - center) / width;
      v = value * std::exp(-z * z);
      break;
    }
    case Family::table: {
      if (a <= ages.front()) {
        v = table.front();
      } else if (a >= ages.back()) {
        v = table.back();
      } else {
        const auto it = std::upper_bound(ages.begin(), ages.end(), a);
        const std::size_t i = static_cast<std::size_t>(it - ages.begin()) - 1;
        const double w = (a - ages[i]) / (ages[i + 1] - ages[i]);
        v = (1.0 - w) * table[i] + w * table[i + 1];
      }
      break;
    }
    case Family::custom:
      break;
  }
  if (spatial_amplitude != 0.0) v *= 1.0 + spatial_amplitude * std::cos(std::numbers::pi * x);
  return v;
}

bool RateFunction::space_independent() const {
  if (family == Family::custom) return custom_space_independent_;
  return spatial_amplitude == 0.0;
}

double VitalRates::beta_sup(const Grid& g) const {
  double m = 0.0;
  for (int j = 0; j <= g.Na; ++j)
    for (int i = 0; i <= g.Nx; ++i) m = std::max(m, std::abs(fertility(g.a(j), g.x(i))));
  return m;
}

}  // namespace popctl
