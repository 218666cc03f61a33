#include <algorithm>
#include <cmath>
#include <limits>

#include "popctl/coeffs.hpp"
#include "popctl/error.hpp"

namespace popctl {

double eval_theta(double t, double a, double T) {
  if (!(t > 0.0) || !(t < T) || !(a > 0.0)) return std::numeric_limits<double>::infinity();
  const double q = t * (T - t) * a;
  const double q2 = q * q;
  return 1.0 / (q2 * q2);
}

double exp_floor(double e) {
  // exp underflows to subnormals below about -708 and to 0 below -745.
  if (!(e > -745.0)) return 0.0;
  return std::exp(e);
}

CarlemanWeights::CarlemanWeights(DegenerateCoefficient k, double T, double s, double kappa)
    : k_(std::move(k)), T_(T), s_(s), kappa_(kappa) {
  if (!(T > 0.0)) throw ValidationError("weights: T must be positive");
  if (!(s >= 0.0)) throw ValidationError("weights: s must be >= 0");
  if (!(kappa > 0.0)) throw ValidationError("weights: kappa must be positive");
}

namespace {

bool p_finite(const DegenerateCoefficient& k) {
  if (k.form == DegenerateCoefficient::Form::power_law) return k.alpha1 < 1.0;
  return !k.zero_at1();
}

bool p_bar_finite(const DegenerateCoefficient& k) {
  if (k.form == DegenerateCoefficient::Form::power_law) return k.alpha0 < 1.0;
  return !k.zero_at0();
}

}  // namespace

double CarlemanWeights::p(double x) const {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) x = 1.0;
  if (k_.form == DegenerateCoefficient::Form::power_law) {
    if (k_.alpha0 >= 2.0) throw ValidationError("weights: p undefined for exponent >= 2");
    if (k_.alpha1 == 0.0) return std::pow(x, 2.0 - k_.alpha0) / (2.0 - k_.alpha0);
  }
  if (x == 1.0 && !p_finite(k_))
    throw ValidationError("weights: p is unbounded at x = 1 for this coefficient");
  const double rest = 1.0 - x;
  return integrate_singular(
      [&](double y, double dlo, double dhi) { return y / k_.value(y, dlo, rest + dhi); }, 0.0, x);
}

double CarlemanWeights::p_bar(double x) const {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) x = 1.0;
  if (!p_bar_finite(k_))
    throw ValidationError("weights: p_bar is unbounded near x = 0 for this coefficient");
  if (k_.form == DegenerateCoefficient::Form::power_law && k_.alpha0 == 0.0) {
    if (k_.alpha1 >= 2.0) throw ValidationError("weights: p_bar undefined for exponent >= 2");
    const double e = 2.0 - k_.alpha1;
    return (std::pow(1.0 - x, e) - 1.0) / e;
  }
  const double rest = 1.0 - x;
  return integrate_singular(
      [&](double y, double dlo, double dhi) {
        const double to1 = rest + dhi;
        return -to1 / k_.value(y, dlo, to1);
      },
      0.0, x);
}

double CarlemanWeights::p_inf() const {
  if (!p_inf_) p_inf_ = p(1.0);
  return *p_inf_;
}

double CarlemanWeights::p_bar_inf() const {
  if (!p_bar_inf_) p_bar_inf_ = -p_bar(1.0);
  return *p_bar_inf_;
}

void CarlemanWeights::set_nondegenerate(double b, double c, std::optional<double> d_override,
                                        std::optional<double> kappa_override) {
  if (!(0.0 <= b && b < c && c <= 1.0))
    throw ValidationError("weights: nondegenerate interval must satisfy 0 <= b < c <= 1");
  constexpr int kSamples = 2000;
  double dmax = 0.0;
  for (int m = 0; m <= kSamples; ++m) {
    const double x = b + (c - b) * m / kSamples;
    const double kv = k_(x);
    if (!(kv > 0.0))
      throw ValidationError("weights: k vanishes at x = " + std::to_string(x) +
                            " inside the nondegenerate interval");
    dmax = std::max(dmax, std::abs(k_.derivative(x)));
  }
  if (d_override) {
    d_ = *d_override;
  } else {
    if (dmax == 0.0)
      throw ValidationError(
          "weights: sup|k'| = 0 on the interval makes sigma and Psi vanish; "
          "pass an explicit d");
    d_ = dmax;
  }
  if (kappa_override) kappa_ = *kappa_override;
  b_ = b;
  c_ = c;
  has_sigma_ = true;
  sigma_inf_ = sigma(b);
}

double CarlemanWeights::sigma(double x) const {
  if (!has_sigma_) throw ValidationError("weights: sigma requested without an interval");
  const double lo = std::clamp(x, b_, c_);
  if (lo >= c_) return 0.0;
  return d_ * integrate_singular(
                  [&](double y, double, double) { return 1.0 / k_(y); }, lo, c_);
}

double CarlemanWeights::Psi(double x) const {
  return std::exp(kappa_ * sigma(x)) - std::exp(2.0 * kappa_ * sigma_inf_);
}

WeightValues eval_weights(const CarlemanWeights& w, double t, double a, double x) {
  WeightValues v;
  v.theta = eval_theta(t, a, w.T());
  const double s = w.s();
  const bool pole = std::isinf(v.theta);
  auto expo = [&](double phi) { return pole ? 0.0 : exp_floor(2.0 * s * phi); };

  const double inf = std::numeric_limits<double>::infinity();
  v.phi = pole ? -inf : v.theta * (w.p(x) - 2.0 * w.p_inf());
  v.exp2s_phi = expo(v.phi);
  if (p_bar_finite(w.k())) {
    v.phi_bar = pole ? -inf : v.theta * (w.p_bar(x) - w.p_bar_inf());
    v.exp2s_phi_bar = expo(v.phi_bar);
  }
  if (w.has_sigma()) {
    const double sig = w.sigma(x);
    v.phi_nd = v.theta * std::exp(w.kappa() * sig);
    const double psi = std::exp(w.kappa() * sig) - std::exp(2.0 * w.kappa() * w.sigma_inf());
    v.Phi = pole ? -inf : v.theta * psi;
    v.exp2s_Phi = expo(v.Phi);
  }
  return v;
}

}  // namespace popctl
