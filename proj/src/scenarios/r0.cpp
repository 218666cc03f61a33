#include <algorithm>
#include <cmath>
#include <vector>

#include "popctl/error.hpp"
#include "popctl/scenarios.hpp"

namespace popctl {

std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::decaying: return "decaying";
    case GrowthClass::growing: return "growing";
    case GrowthClass::steady: break;
  }
  return "steady";
}

namespace {

// Ages where a rate may jump or kink.
void add_breakpoints(const RateFunction& f, double A, std::vector<double>& out) {
  auto put = [&](double a) {
    if (std::isfinite(a) && a > 0.0 && a < A) out.push_back(a);
  };
  put(f.lo);
  put(f.hi);
  if (f.family == RateFunction::Family::table)
    for (double a : f.ages) put(a);
}

}  // namespace

R0Result net_reproduction_rate(const VitalRates& rates, double A, int cells) {
  if (!rates.beta.space_independent() || !rates.mu.space_independent())
    throw ValidationError("r0: rates vary in space, so there is no single R0");
  if (!(A > 0.0) || cells < 1) throw ValidationError("r0: need A > 0 and at least one cell");

  // Trapezoid on each piece between breakpoints, with the end values taken as
  // one-sided limits from inside the piece, so jumps cost nothing.
  std::vector<double> cuts{0.0, A};
  add_breakpoints(rates.beta, A, cuts);
  add_breakpoints(rates.mu, A, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double cum_mu = 0.0;  // int_0^a mu
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double lo = cuts[p], hi = cuts[p + 1];
    const int n = std::max(1, static_cast<int>(std::lround(cells * (hi - lo) / A)));
    const double h = (hi - lo) / n;
    auto at = [&](int c) {
      if (c == 0) return std::nextafter(lo, hi);
      if (c == n) return std::nextafter(hi, lo);
      return lo + c * h;
    };
    double mu_prev = rates.mortality(0.0, at(0), 0.5);
    double prev = rates.fertility(at(0), 0.5) * std::exp(-cum_mu);
    for (int c = 1; c <= n; ++c) {
      const double a = at(c);
      const double mu = rates.mortality(0.0, a, 0.5);
      cum_mu += 0.5 * h * (mu_prev + mu);
      mu_prev = mu;
      const double cur = rates.fertility(a, 0.5) * std::exp(-cum_mu);
      sum += 0.5 * h * (prev + cur);
      prev = cur;
    }
  }
  R0Result r;
  r.value = sum;
  if (sum > 1.0 + 1e-9)
    r.growth = GrowthClass::growing;
  else if (sum < 1.0 - 1e-9)
    r.growth = GrowthClass::decaying;
  else
    r.growth = GrowthClass::steady;
  return r;
}

}  // namespace popctl
