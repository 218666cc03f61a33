#pragma once

// Forward solver for the age-space population model, its exact discrete
// adjoint, the energy audit and characteristic-line utilities.
//
// One time step maps level j-1 at t^n to level j at t^{n+1} (dt = da), then
// solves the implicit diffusion-reaction system on each age level j >= 1, then
// fills the newborn level j = 0 from the renewal integral. The adjoint step is
// the transpose of that map in the inner product
//   <u, w> = da dx sum_j sum_i u_ji w_ji.

#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "popctl/coeffs.hpp"
#include "popctl/discretize.hpp"

namespace popctl {

struct ProblemSpec {
  DegenerateCoefficient k;
  VitalRates rates;
  Grid grid;
  std::pair<double, double> omega{0.3, 0.7};
  Field2 y0;
};

/// Grid, field sizes, omega and sign checks needed by the solver itself.
void validate_spec(const ProblemSpec& spec);

/// Assembled one-step operator for a spec. Keeps per-step scratch buffers,
/// so one instance must not be shared between threads.
class StepOperator {
 public:
  explicit StepOperator(const ProblemSpec& spec);

  const Grid& grid() const { return grid_; }

  /// y_next = step(y_prev) with source f_next (age levels >= 1, masked by the
  /// control indicator). f_next may be empty.
  void forward(std::span<const double> y_prev, std::span<const double> f_next, int n_next,
               std::span<double> y_next) const;

  /// Transpose step. Given v at t^{n+1} returns v at t^n and the observation
  /// field q^{n+1} = D (R^T v^{n+1} - dt g^{n+1}). g may be empty; q may be
  /// empty when not needed.
  void adjoint(std::span<const double> v_next, std::span<const double> g_next, int n_next,
               std::span<double> v_prev, std::span<double> q_next) const;

  /// (I + dt L_j) u on interior nodes of level j at time t^{n}; other entries 0.
  void apply_implicit(std::span<const double> u, int j, int n, std::span<double> out) const;

  /// Renewal value for node i from levels >= 1 of a slice.
  double renewal(std::span<const double> y, int i) const;

  /// Control indicator of omega-bar at x node i.
  double chi(int i) const { return chi_[static_cast<std::size_t>(i)]; }
  std::span<const double> face_k() const { return face_k_; }

  /// Uniform inner product of two slices.
  double inner(std::span<const double> a, std::span<const double> b) const;

  /// da * sum_j sum_faces k (du)^2 / dx, the discrete int int k u_x^2.
  double flux(std::span<const double> u) const;

 private:
  void solve_levels(std::span<double> rhs, int n) const;

  Grid grid_;
  VitalRates rates_;
  std::vector<double> face_k_;  // Nx faces
  std::vector<double> chi_;     // Nx+1 nodes
  std::vector<double> renew_w_; // (Na+1)*(Nx+1): c_i * w_j * beta(a_j, x_i)
  std::vector<double> lower_, upper_;
  bool mu_time_dependent_ = true;
  mutable std::vector<double> diag_, work_, buf_;
  mutable int diag_step_ = -1;
};

struct EnergyRecord {
  int step = 0;
  double t = 0.0;
  double supnorm = 0.0;  // |y(t_n)|^2 in the solver inner product
  double flux = 0.0;     // int int k y_x^2 at t_n
};

struct Trajectory {
  Grid grid;
  Field3 state;
  std::vector<EnergyRecord> energy_log;
};

/// Zero control when f is null. f is masked by the control indicator.
Trajectory solve_forward(const ProblemSpec& spec, const Field3* f = nullptr);

struct AdjointSolution {
  Trajectory v;
  Field3 q;  // observation field q^n, n = 1..Nt (slice 0 is zero)
};

/// Backward sweep from v_T. The renewal coupling beta(a,x) v(t,0,x) is always
/// present since it is the transpose of the renewal row; g adds a prescribed
/// source. Throws ValidationError if v_T is nonzero on the a = A level.
AdjointSolution solve_adjoint(const ProblemSpec& spec, const Field2& v_T,
                              const Field3* g = nullptr);

/// Zeroes every x node outside omega-bar.
Field3 mask_to_omega(const ProblemSpec& spec, const Field3& f);

struct ResidualNorms {
  double l2 = 0.0;    // sqrt(dt sum_n |r^n/dt|^2) over age levels >= 1
  double max = 0.0;   // max |r^n/dt| over age levels >= 1
  double renewal = 0.0;    // max |y_0 - renewal(y)|
  double dirichlet = 0.0;  // max |y| on the x endpoints
};

/// Residual of (y, source) in the scheme: (I + dt L_j) y^{n+1}_j - y^n_{j-1}
/// - dt source^{n+1}_j. The source is used as given (not masked).
ResidualNorms discrete_residual(const ProblemSpec& spec, const Field3& y, const Field3& source);

void write_energy_csv(const std::filesystem::path& path, const Trajectory& traj);

// ---- energy ---------------------------------------------------------------

struct EnergyAudit {
  double sup_norm = 0.0;       // max_n |y(t_n)|^2
  double flux_integral = 0.0;  // sum_n dt * flux^n
  double lhs = 0.0;
  double data = 0.0;           // |y0|^2 + |f|^2_Q
  double C = 0.0;              // e^{A |beta|^2 T} (1 + T)
  double rhs_bound = 0.0;      // C * data
  bool pass = false;
  bool nonincreasing = false;  // |y(t_n)|^2 never grows beyond 1e-12 relative
};

EnergyAudit energy_audit(const Trajectory& traj, const ProblemSpec& spec,
                         const Field3* f = nullptr);

// ---- characteristics --------------------------------------------------------

/// min(a_bar, A - a + t - T_tilde).
double characteristic_gamma(double t, double a, double T_tilde, double a_bar, double A);

struct CharacteristicDefect {
  double max_relative = 0.0;
  double max_absolute = 0.0;
  std::vector<std::pair<int, int>> samples;  // (n, j) pairs audited
};

/// With beta = 0 the adjoint at (t_n, a_j) equals v_T shifted along the
/// characteristic and then diffused for T - t_n. The reference here runs that
/// diffusion with `substeps` backward-Euler substeps per dt.
CharacteristicDefect characteristic_consistency(const ProblemSpec& spec, const Field2& v_T,
                                                std::vector<std::pair<int, int>> samples = {},
                                                int substeps = 4);

}  // namespace popctl
