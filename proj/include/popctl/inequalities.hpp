#pragma once

// Empirical-constant audits: Hardy-Poincare, Carleman (degenerate at 0, at 1,
// nondegenerate, omega-local), Caccioppoli and observability.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popctl/coeffs.hpp"
#include "popctl/discretize.hpp"
#include "popctl/solver.hpp"

namespace popctl {

struct AuditSample {
  int sample_id = 0;
  double s = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;     // NaN when excluded
  bool excluded = false;  // 0/0
  bool violation = false; // lhs > 0 with rhs <= 0
};

struct InequalityReport {
  std::string name;
  std::vector<AuditSample> samples;
  double empirical_constant = 0.0;
  std::vector<double> sweep;
  std::vector<std::pair<double, double>> constant_by_s;
  std::vector<double> refinement_trace;
  double s_used = 0.0;
  bool unstable = false;
  bool violation = false;
  std::optional<double> bound;  // explicit constant when one is asserted
  bool bound_holds = true;
  std::optional<Grid> grid;
  std::uint64_t seed = 0;

  /// Appends a sample and updates the maxima.
  void add(int sample_id, double s, double lhs, double rhs);
  std::size_t counted() const;

  /// sample_id,s,lhs,rhs,ratio
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;
};

inline const std::vector<double> kDefaultSweep{1, 2, 5, 10, 20, 50};

// ---- cut-offs --------------------------------------------------------------

struct Smooth {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// 6t^5 - 15t^4 + 10t^3 clamped to [0,1], with its derivatives.
Smooth smoothstep(double t);

/// Cut-offs attached to omega = (alpha, rho). With m = [(2a+r)/3, (a+2r)/3]:
/// xi falls from 1 to 0 on the left half of m, eta rises from 0 to 1 on the
/// right half, phi = 1 - xi - eta is a bump on m, and tau is 1 on m and zero
/// outside (alpha_tilde, rho_tilde). All derivatives vanish outside omega.
class CutoffFamily {
 public:
  CutoffFamily(double alpha, double rho);

  Smooth xi(double x) const;
  Smooth eta(double x) const;
  Smooth phi(double x) const;
  Smooth tau(double x) const;
  /// The pair xi, 1 - xi used by the omega-local estimate.
  Smooth eta_complement(double x) const;

  double alpha() const { return alpha_; }
  double rho() const { return rho_; }
  double m_lo() const { return m_lo_; }
  double m_mid() const { return m_mid_; }
  double m_hi() const { return m_hi_; }
  double alpha_tilde() const { return at_; }
  double rho_tilde() const { return rt_; }

 private:
  double alpha_, rho_, m_lo_, m_mid_, m_hi_, at_, rt_;
};

// ---- Hardy-Poincare -----------------------------------------------------------

/// HP1/HP1': w(1) = 0; HP2/HP2': w(0) = 0. The primed cases have k/(1-x)^theta
/// globally monotone and carry the explicit constant 4/(1-theta)^2.
enum class HardyCase { HP1, HP1p, HP2, HP2p };

/// Test function with derivative. Arguments are (x, x, 1-x) so factors like
/// (1-x)^gamma can be evaluated without cancellation.
struct TestFunction {
  std::string label;
  std::function<double(double x, double d0, double d1)> w;
  std::function<double(double x, double d0, double d1)> dw;
};

/// LHS = int k/(1-x)^2 w^2, RHS = int k w'^2 per test function.
InequalityReport hardy_ratio(const DegenerateCoefficient& k, double theta, HardyCase c,
                             const std::vector<TestFunction>& ws);

/// LHS = int k/x^2 w^2, RHS = int k w'^2: hardy_ratio applied to the mirrored
/// data under x -> 1-x (vanishing conditions mirror too).
InequalityReport hardy_ratio_at_zero(const DegenerateCoefficient& k, double theta, HardyCase c,
                                     const std::vector<TestFunction>& ws);

/// Admissible random test functions: sine series and (1-x)^gamma times a
/// smooth positive factor, gamma drawn above the integrability threshold.
std::vector<TestFunction> random_hardy_family(HardyCase c, double theta, int count,
                                              std::uint64_t seed);

// ---- manufactured solutions --------------------------------------------------

/// Sample for the Carleman audits: v on the grid and the source
/// f = v_t + v_a + (k v_x)_x - mu v computed by the discrete operator.
struct ManufacturedPair {
  Grid grid;
  Field3 v;
  Field3 f;
};

/// Second-order differences in t and a, face-flux form in x; f on the x
/// endpoints is extrapolated. Throws ValidationError if v is nonzero at the x
/// endpoints.
ManufacturedPair manufactured_adjoint(const DegenerateCoefficient& k, const VitalRates& rates,
                                      const Grid& g, const Field3& v);
ManufacturedPair manufactured_adjoint(const DegenerateCoefficient& k, const VitalRates& rates,
                                      const Grid& g,
                                      const std::function<double(double, double, double)>& v);

/// Smooth profiles vanishing at the x ends (cubically where k degenerates,
/// linearly elsewhere) and like (A-a) at a = A, with seeded coefficients.
std::vector<ManufacturedPair> manufactured_family(const DegenerateCoefficient& k,
                                                  const VitalRates& rates, const Grid& g,
                                                  int count, std::uint64_t seed);

// ---- Carleman ----------------------------------------------------------------

struct CarlemanOptions {
  std::vector<double> sweep = kDefaultSweep;
  double kappa = 1.0;
  std::optional<double> frak_d;          // nondegenerate audit: override of sup|k'|
  bool check_instability = true;         // re-run at 2 * max(sweep)
  double instability_growth = 4.0;
};

/// int (s Theta k v_x^2 + s^3 Theta^3 x^2/k v^2) e^{2 s phi}
///   <= C (int f^2 e^{2 s phi} + s int int Theta [k v_x^2 e^{2 s phi}](x=1)).
/// T of the weights is the grid horizon.
InequalityReport carleman_audit_deg0(const std::vector<ManufacturedPair>& samples,
                                     const DegenerateCoefficient& k,
                                     const CarlemanOptions& opt = {});

/// Mirror of the above with (x-1)^2/k, phi_bar and the boundary term at x=0.
InequalityReport carleman_audit_deg1(const std::vector<ManufacturedPair>& samples,
                                     const DegenerateCoefficient& k,
                                     const CarlemanOptions& opt = {});

/// int (s^3 phi^3 z^2 + s phi z_x^2) e^{2 s Phi}
///   <= C (int f^2 e^{2 s Phi} - s kappa int int [k e^{2 s Phi} phi z_x^2]_b^c)
/// over the x-range [b, c] of the samples' grid, where k must be positive.
InequalityReport carleman_audit_nondeg(const std::vector<ManufacturedPair>& samples,
                                       const DegenerateCoefficient& k,
                                       const CarlemanOptions& opt = {});

/// Degenerate LHS <= C (int f^2 e^{2 s Phi} + int int int_omega v^2), with
/// sigma, Psi built on omega.
InequalityReport carleman_local_audit(const std::vector<ManufacturedPair>& samples,
                                      const DegenerateCoefficient& k,
                                      std::pair<double, double> omega,
                                      const CarlemanOptions& opt = {});

// ---- Caccioppoli -----------------------------------------------------------

/// int int int_{omega'} v_x^2 e^{2 s psi} <= C (int int int_omega v^2
///   + int f^2 e^{2 s psi}), psi = Theta Psi with Psi built on omega.
InequalityReport caccioppoli_audit(const std::vector<ManufacturedPair>& samples,
                                   const DegenerateCoefficient& k,
                                   std::pair<double, double> omega_prime,
                                   std::pair<double, double> omega, double s,
                                   double kappa = 1.0);

// ---- observability -----------------------------------------------------------

enum class ObservabilityMode {
  standard,       // int_0^delta int v_T^2 + int int int_omega v^2
  zero_near_0,    // v_T vanishes on (0, delta): drop the v_T term
  with_interior,  // adds int_0^T int_0^delta int v^2
};

/// LHS = int int v^2(T - a_bar) per adjoint sample (renewal-coupled).
InequalityReport observability_ratio(const ProblemSpec& spec, const std::vector<Field2>& ensemble,
                                     double delta,
                                     ObservabilityMode mode = ObservabilityMode::standard);

}  // namespace popctl
