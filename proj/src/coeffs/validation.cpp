#include <cmath>
#include <sstream>

#include "popctl/coeffs.hpp"
#include "popctl/error.hpp"

namespace popctl {

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

namespace {

std::string fmt(const char* what, double a, double b) {
  std::ostringstream os;
  os.precision(6);
  os << what << " " << a << " vs " << b;
  return os.str();
}

// Points approaching an endpoint: table nodes for tabulated k, a geometric
// sequence otherwise.
std::vector<double> near_points(const DegenerateCoefficient& k, bool at_zero) {
  std::vector<double> xs;
  if (k.form == DegenerateCoefficient::Form::tabulated) {
    const std::size_t n = k.samples.size();
    const std::size_t near = std::max<std::size_t>(1, (n - 1) / 10);
    const double h = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 1; i <= near; ++i)
      xs.push_back(at_zero ? static_cast<double>(i) * h : 1.0 - static_cast<double>(i) * h);
  } else {
    for (int m = 3; m <= 8; ++m) {
      const double d = std::pow(10.0, -m);
      xs.push_back(at_zero ? d : 1.0 - d);
    }
  }
  return xs;
}

}  // namespace

ValidationReport validate_hypotheses(const DegenerateCoefficient& k, const VitalRates& rates,
                                     double T, double A, std::pair<double, double> omega,
                                     double delta) {
  ValidationReport r;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    r.checks.push_back({std::move(name), pass, pass ? std::string{} : std::move(detail)});
  };

  add("T < A", T < A, fmt("T, A =", T, A));
  add("a_bar in (0, T]", rates.a_bar > 0.0 && rates.a_bar <= T, fmt("a_bar, T =", rates.a_bar, T));
  add("delta in (T, A)", delta > T && delta < A, fmt("delta, T =", delta, T));
  add("omega strictly inside (0,1)",
      0.0 < omega.first && omega.first < omega.second && omega.second < 1.0,
      fmt("omega =", omega.first, omega.second));

  {
    bool ok = true;
    std::string w;
    for (int m = 1; m < 1000 && ok; ++m) {
      const double x = m / 1000.0;
      if (!(k(x) > 0.0)) {
        ok = false;
        w = fmt("k(x) at x =", x, k(x));
      }
    }
    add("k > 0 in (0,1)", ok, w);
  }

  std::optional<Degeneracy> deg;
  try {
    deg = classify_degeneracy(k);
    add("M1, M2 in (0,2)", true);
  } catch (const ValidationError& e) {
    add("M1, M2 in (0,2)", false, e.what());
  }

  // Fertility window and sign conditions on a sample lattice.
  {
    constexpr int Na = 400, Nx = 50, Nt = 8;
    bool window_ok = true, beta_ok = true, mu_ok = true;
    std::string ww, wb, wm;
    for (int j = 0; j <= Na; ++j) {
      const double a = A * j / Na;
      for (int i = 0; i <= Nx; ++i) {
        const double x = static_cast<double>(i) / Nx;
        const double b = rates.fertility(a, x);
        if (window_ok && a <= rates.a_bar && b != 0.0) {
          window_ok = false;
          ww = fmt("beta(a, x) nonzero at a, x =", a, x);
        }
        if (beta_ok && !(b >= 0.0)) {
          beta_ok = false;
          wb = fmt("beta < 0 at a, x =", a, x);
        }
        for (int n = 0; n <= Nt && mu_ok; ++n) {
          const double t = T * n / Nt;
          if (!(rates.mortality(t, a, x) >= 0.0)) {
            mu_ok = false;
            wm = fmt("mu < 0 at a, x =", a, x);
          }
        }
      }
    }
    {
      const double b0 = rates.fertility(0.0, 0.5);
      if (window_ok && b0 != 0.0) {
        window_ok = false;
        ww = fmt("beta(0, x) nonzero at x, value =", 0.5, b0);
      }
    }
    add("fertility window: beta = 0 for a <= a_bar", window_ok, ww);
    add("beta >= 0", beta_ok, wb);
    add("mu >= 0", mu_ok, wm);
  }

  if (deg) {
    if (deg->at0 == EndpointClass::strong) {
      bool ok = deg->theta0.has_value() && *deg->theta0 > 0.0 && *deg->theta0 <= deg->M1;
      std::string w = ok ? "" : "no theta in (0, M1]";
      if (ok) {
        const double tol = k.form == DegenerateCoefficient::Form::tabulated ? 1e-6 : 1e-2;
        for (double x : near_points(k, true)) {
          const double ratio = x * k.derivative(x) / k(x);
          if (ratio < *deg->theta0 - tol * std::max(1.0, *deg->theta0)) {
            ok = false;
            w = fmt("x k'/k below theta at x =", x, ratio);
            break;
          }
        }
      }
      add("k/x^theta nondecreasing near 0", ok, w);
    }
    // Also checked for M2 >= 1, mirroring the condition at 0.
    if (deg->at1 == EndpointClass::strong) {
      bool ok = deg->theta1.has_value() && *deg->theta1 > 0.0 && *deg->theta1 <= deg->M2;
      std::string w = ok ? "" : "no theta in (0, M2]";
      if (ok) {
        const double tol = k.form == DegenerateCoefficient::Form::tabulated ? 1e-6 : 1e-2;
        for (double x : near_points(k, false)) {
          const double ratio = (x - 1.0) * k.derivative(x) / k(x);
          if (ratio < *deg->theta1 - tol * std::max(1.0, *deg->theta1)) {
            ok = false;
            w = fmt("(x-1) k'/k below theta at x =", x, ratio);
            break;
          }
        }
      }
      add("k/|1-x|^theta nonincreasing near 1", ok, w);
    }
  }
  return r;
}

}  // namespace popctl
