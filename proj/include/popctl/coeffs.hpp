#pragma once

// Diffusion coefficient, vital rates and the Carleman weight functions.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popctl/discretize.hpp"

namespace popctl {

enum class EndpointClass { nondegenerate, weak, strong };

std::string to_string(EndpointClass c);

/// k(x) on [0,1]: either x^alpha0 (1-x)^alpha1 or samples on a uniform grid
/// (linear interpolation between samples).
struct DegenerateCoefficient {
  enum class Form { power_law, tabulated };

  Form form = Form::power_law;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  std::vector<double> samples;  // k at x_i = i/(n-1)
  std::vector<double> slopes;   // k' at the same points
  std::optional<double> M1, M2, theta0, theta1;

  static DegenerateCoefficient power_law(double alpha0, double alpha1);
  /// Slopes are taken by finite differences when not given.
  static DegenerateCoefficient tabulated(std::vector<double> samples,
                                         std::vector<double> slopes = {});

  double operator()(double x) const { return value(x, x, 1.0 - x); }
  /// k with the distances to both endpoints supplied separately, so power laws
  /// stay accurate next to a degenerate endpoint.
  double value(double x, double dist0, double dist1) const;
  double derivative(double x) const;
  /// Face value used by the finite-volume flux at x_{i+1/2}.
  double face(double x_mid) const;

  bool zero_at0() const;
  bool zero_at1() const;

  /// k(1 - x).
  DegenerateCoefficient mirrored() const;
};

struct Degeneracy {
  EndpointClass at0 = EndpointClass::nondegenerate;
  EndpointClass at1 = EndpointClass::nondegenerate;
  double M1 = 0.0;
  double M2 = 0.0;
  std::optional<double> theta0;
  std::optional<double> theta1;
};

/// Certifies the endpoint classes and the constants M1, M2 (bounds on x k'/k
/// and (x-1) k'/k) and theta0, theta1. Throws ValidationError when M >= 2 or
/// k <= 0 somewhere in (0,1).
Degeneracy classify_degeneracy(const DegenerateCoefficient& k);

/// A nonnegative function of (t, a, x) from one of the named families,
/// restricted to ages in (lo, hi].
struct RateFunction {
  enum class Family { constant, window, gaussian_bump, table, custom };

  Family family = Family::constant;
  double value = 0.0;  // level (constant/window) or peak (gaussian_bump)
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double center = 0.0;
  double width = 1.0;
  std::vector<double> ages;  // table nodes (increasing)
  std::vector<double> table;
  /// Optional spatial modulation 1 + spatial_amplitude*cos(pi x).
  double spatial_amplitude = 0.0;
  std::function<double(double t, double a, double x)> fn;

  static RateFunction constant(double v);
  static RateFunction window(double v, double lo, double hi);
  static RateFunction gaussian_bump(double peak, double center, double width,
                                    double lo = -std::numeric_limits<double>::infinity());
  static RateFunction tabulated(std::vector<double> ages, std::vector<double> values);
  static RateFunction custom(std::function<double(double t, double a, double x)> fn,
                             bool space_independent = false);

  double operator()(double t, double a, double x) const;
  bool space_independent() const;

 private:
  bool custom_space_independent_ = false;
};

struct VitalRates {
  RateFunction beta;  // fertility, of (a, x)
  RateFunction mu;    // mortality, of (t, a, x)
  double a_bar = 0.5;

  double fertility(double a, double x) const { return beta(0.0, a, x); }
  double mortality(double t, double a, double x) const { return mu(t, a, x); }
  /// max |beta| over the grid nodes.
  double beta_sup(const Grid& g) const;
};

// ---- Carleman weights -----------------------------------------------------

/// 1/(t^4 (T-t)^4 a^4); +infinity at t in {0,T} or a = 0.
double eval_theta(double t, double a, double T);

/// exp(e) with exponents below the double floor mapped to exactly 0.
double exp_floor(double e);

/// Weight data for one coefficient and horizon. p and p_bar are the primitives
/// of x/k and (x-1)/k from 0; sigma = d * int_{clamp(x)}^{c} 1/k over the
/// nondegenerate interval [b, c].
class CarlemanWeights {
 public:
  CarlemanWeights(DegenerateCoefficient k, double T, double s, double kappa = 1.0);

  /// Enables sigma, Psi and Phi on [b, c], where k must be positive.
  /// d defaults to sup |k'| on [b, c]; a zero d is rejected unless given
  /// explicitly.
  void set_nondegenerate(double b, double c, std::optional<double> d_override = {},
                         std::optional<double> kappa_override = {});

  const DegenerateCoefficient& k() const { return k_; }
  double T() const { return T_; }
  double s() const { return s_; }
  void set_s(double s) { s_ = s; }
  double kappa() const { return kappa_; }
  double frak_d() const { return d_; }
  bool has_sigma() const { return has_sigma_; }
  std::pair<double, double> nondegenerate_interval() const { return {b_, c_}; }

  double p(double x) const;
  double p_bar(double x) const;
  double p_inf() const;
  double p_bar_inf() const;
  double sigma(double x) const;
  double sigma_inf() const { return sigma_inf_; }
  double Psi(double x) const;

 private:
  DegenerateCoefficient k_;
  double T_;
  double s_;
  double kappa_;
  double d_ = 0.0;
  double b_ = 0.0;
  double c_ = 1.0;
  bool has_sigma_ = false;
  double sigma_inf_ = 0.0;
  mutable std::optional<double> p_inf_;
  mutable std::optional<double> p_bar_inf_;
};

struct WeightValues {
  double theta = 0.0;
  double phi = 0.0;      // theta (p - 2 |p|)
  double phi_bar = 0.0;  // theta (p_bar - |p_bar|)
  double phi_nd = 0.0;   // theta e^{kappa sigma}
  double Phi = 0.0;      // theta Psi
  double exp2s_phi = 0.0;
  double exp2s_phi_bar = 0.0;
  double exp2s_Phi = 0.0;
};

/// Pointwise weights. Entries needing p_bar or sigma are left at 0 when those
/// are unavailable for the coefficient.
WeightValues eval_weights(const CarlemanWeights& w, double t, double a, double x);

// ---- hypotheses -------------------------------------------------------------

struct HypothesisCheck {
  std::string name;
  bool pass = true;
  std::string detail;  // witnessing sample on failure
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass() const;
  std::string summary() const;
};

ValidationReport validate_hypotheses(const DegenerateCoefficient& k, const VitalRates& rates,
                                     double T, double A, std::pair<double, double> omega,
                                     double delta);

}  // namespace popctl
