#include <algorithm>

#include "popctl/error.hpp"
#include "popctl/inequalities.hpp"

namespace popctl {

Smooth smoothstep(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {t3 * (10.0 - 15.0 * t + 6.0 * t2), 30.0 * t2 * (1.0 - t) * (1.0 - t),
          60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)};
}

namespace {

// Rises from 0 at lo to 1 at hi.
Smooth rise(double x, double lo, double hi) {
  const double h = hi - lo;
  const Smooth s = smoothstep((x - lo) / h);
  return {s.v, s.d1 / h, s.d2 / (h * h)};
}

Smooth one_minus(Smooth s) { return {1.0 - s.v, -s.d1, -s.d2}; }

}  // namespace

CutoffFamily::CutoffFamily(double alpha, double rho) : alpha_(alpha), rho_(rho) {
  if (!(0.0 < alpha && alpha < rho && rho < 1.0))
    throw ValidationError("cut-offs: omega must satisfy 0 < alpha < rho < 1");
  m_lo_ = (2.0 * alpha + rho) / 3.0;
  m_hi_ = (alpha + 2.0 * rho) / 3.0;
  m_mid_ = 0.5 * (m_lo_ + m_hi_);
  at_ = 0.5 * (alpha + m_lo_);
  rt_ = 0.5 * (m_hi_ + rho);
}

Smooth CutoffFamily::xi(double x) const { return one_minus(rise(x, m_lo_, m_mid_)); }

Smooth CutoffFamily::eta(double x) const { return rise(x, m_mid_, m_hi_); }

Smooth CutoffFamily::phi(double x) const {
  const Smooth a = xi(x);
  const Smooth b = eta(x);
  return {1.0 - a.v - b.v, -a.d1 - b.d1, -a.d2 - b.d2};
}

Smooth CutoffFamily::tau(double x) const {
  if (x <= m_hi_) return rise(x, at_, m_lo_);
  return one_minus(rise(x, m_hi_, rt_));
}

Smooth CutoffFamily::eta_complement(double x) const { return one_minus(xi(x)); }

}  // namespace popctl
