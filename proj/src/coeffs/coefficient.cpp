#include <algorithm>
#include <cmath>
#include <sstream>

#include "popctl/coeffs.hpp"
#include "popctl/error.hpp"

namespace popctl {

std::string to_string(EndpointClass c) {
  switch (c) {
    case EndpointClass::weak: return "WD";
    case EndpointClass::strong: return "SD";
    case EndpointClass::nondegenerate: break;
  }
  return "nondegenerate";
}

DegenerateCoefficient DegenerateCoefficient::power_law(double alpha0, double alpha1) {
  if (!(alpha0 >= 0.0) || !(alpha1 >= 0.0))
    throw ValidationError("k: power-law exponents must be >= 0");
  DegenerateCoefficient k;
  k.form = Form::power_law;
  k.alpha0 = alpha0;
  k.alpha1 = alpha1;
  return k;
}

DegenerateCoefficient DegenerateCoefficient::tabulated(std::vector<double> samples,
                                                       std::vector<double> slopes) {
  const std::size_t n = samples.size();
  if (n < 3) throw ValidationError("k: a table needs at least 3 samples");
  for (double v : samples)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("k: table samples must be finite and >= 0");
  if (slopes.empty()) {
    const double h = 1.0 / static_cast<double>(n - 1);
    slopes.resize(n);
    slopes[0] = (-3 * samples[0] + 4 * samples[1] - samples[2]) / (2 * h);
    slopes[n - 1] = (3 * samples[n - 1] - 4 * samples[n - 2] + samples[n - 3]) / (2 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) slopes[i] = (samples[i + 1] - samples[i - 1]) / (2 * h);
  } else if (slopes.size() != n) {
    throw ValidationError("k: derivative table length differs from sample table");
  }
  DegenerateCoefficient k;
  k.form = Form::tabulated;
  k.samples = std::move(samples);
  k.slopes = std::move(slopes);
  return k;
}

namespace {

double interp(const std::vector<double>& tab, double x) {
  const std::size_t n = tab.size();
  const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * tab[i] + w * tab[i + 1];
}

double safe_pow(double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); }

}  // namespace

double DegenerateCoefficient::value(double x, double dist0, double dist1) const {
  if (form == Form::power_law) return safe_pow(dist0, alpha0) * safe_pow(dist1, alpha1);
  return interp(samples, x);
}

double DegenerateCoefficient::derivative(double x) const {
  if (form == Form::tabulated) return interp(slopes, x);
  const double y = 1.0 - x;
  double d = 0.0;
  if (alpha0 != 0.0) d += alpha0 * safe_pow(x, alpha0 - 1.0) * safe_pow(y, alpha1);
  if (alpha1 != 0.0) d -= alpha1 * safe_pow(x, alpha0) * safe_pow(y, alpha1 - 1.0);
  return d;
}

double DegenerateCoefficient::face(double x_mid) const { return (*this)(x_mid); }

bool DegenerateCoefficient::zero_at0() const {
  return form == Form::power_law ? alpha0 > 0.0 : samples.front() == 0.0;
}

bool DegenerateCoefficient::zero_at1() const {
  return form == Form::power_law ? alpha1 > 0.0 : samples.back() == 0.0;
}

DegenerateCoefficient DegenerateCoefficient::mirrored() const {
  DegenerateCoefficient m = *this;
  if (form == Form::power_law) {
    std::swap(m.alpha0, m.alpha1);
  } else {
    std::reverse(m.samples.begin(), m.samples.end());
    std::reverse(m.slopes.begin(), m.slopes.end());
    for (double& s : m.slopes) s = -s;
  }
  std::swap(m.M1, m.M2);
  std::swap(m.theta0, m.theta1);
  return m;
}

namespace {

EndpointClass class_of(bool zero, double M, const char* side) {
  if (!zero) return EndpointClass::nondegenerate;
  if (M >= 2.0) {
    std::ostringstream os;
    os << "k: M" << side << " = " << M << " >= 2 is excluded";
    throw ValidationError(os.str());
  }
  if (!(M > 0.0)) {
    std::ostringstream os;
    os << "k: degenerate at x=" << (side[0] == '1' ? 0 : 1) << " but M" << side << " = " << M
       << " is not positive";
    throw ValidationError(os.str());
  }
  return M < 1.0 ? EndpointClass::weak : EndpointClass::strong;
}

}  // namespace

Degeneracy classify_degeneracy(const DegenerateCoefficient& k) {
  Degeneracy d;
  if (k.form == DegenerateCoefficient::Form::power_law) {
    d.M1 = k.alpha0;
    d.M2 = k.alpha1;
    d.at0 = class_of(k.zero_at0(), d.M1, "1");
    d.at1 = class_of(k.zero_at1(), d.M2, "2");
    // x k'/k = alpha0 - alpha1 x/(1-x) tends to alpha0 at 0, so alpha0 is the
    // largest exponent with k/x^theta nondecreasing in the limit.
    if (d.at0 != EndpointClass::nondegenerate) d.theta0 = k.alpha0;
    if (d.at1 != EndpointClass::nondegenerate) d.theta1 = k.alpha1;
  } else {
    const std::size_t n = k.samples.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (!(k.samples[i] > 0.0)) {
        std::ostringstream os;
        os << "k: k(" << i * h << ") = " << k.samples[i] << " <= 0 in the interior";
        throw ValidationError(os.str());
      }
    double m1 = -std::numeric_limits<double>::infinity();
    double m2 = m1;
    const std::size_t near = std::max<std::size_t>(1, (n - 1) / 10);
    double th0 = std::numeric_limits<double>::infinity();
    double th1 = th0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * h;
      const double kv = k.samples[i];
      if (kv <= 0.0) continue;
      const double r0 = x * k.slopes[i] / kv;
      const double r1 = (x - 1.0) * k.slopes[i] / kv;
      m1 = std::max(m1, r0);
      m2 = std::max(m2, r1);
      if (i >= 1 && i <= near) th0 = std::min(th0, r0);
      if (i + 1 < n && i + 1 >= n - near) th1 = std::min(th1, r1);
    }
    d.M1 = m1;
    d.M2 = m2;
    d.at0 = class_of(k.zero_at0(), d.M1, "1");
    d.at1 = class_of(k.zero_at1(), d.M2, "2");
    if (d.at0 != EndpointClass::nondegenerate && th0 > 0.0) d.theta0 = std::min(th0, d.M1);
    if (d.at1 != EndpointClass::nondegenerate && th1 > 0.0) d.theta1 = std::min(th1, d.M2);
  }
  if (k.M1 && d.at0 != EndpointClass::nondegenerate && *k.M1 + 1e-12 < d.M1)
    throw ValidationError("k: declared M1 is below the certified bound x k'/k");
  if (k.M2 && d.at1 != EndpointClass::nondegenerate && *k.M2 + 1e-12 < d.M2)
    throw ValidationError("k: declared M2 is below the certified bound (x-1) k'/k");
  return d;
}

}  // namespace popctl
