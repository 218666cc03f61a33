#pragma once

// Null controls: penalized HUM by conjugate gradient, the delay composition
// (free phase then controlled phase) and the two-sided cut-off gluing.

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "popctl/solver.hpp"

namespace popctl {

struct HUMConfig {
  double epsilon = 1e-6;
  double cg_tol = 1e-8;  // on ||r|| / ||rhs||
  int cg_max_iter = 300;
  double delta = 1.25;   // target ages (delta, A)
  int stagnation_window = 20;

  /// Throws ValidationError unless epsilon > 0, tolerances are positive and
  /// delta lies in (T, A) of the given grid.
  void validate(const Grid& g) const;
};

struct CGRecord {
  int iter = 0;
  double functional = 0.0;
  double residual = 0.0;  // relative
};

struct CGResult {
  std::vector<double> x;
  std::vector<CGRecord> log;
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;
  double functional = 0.0;
  double rel_residual = 0.0;
};

/// Solves A x = rhs for a symmetric positive definite A in the inner product
/// scale * dot. The logged functional is 1/2 <Ax, x> - <rhs, x>. Stops on
/// tolerance, the iteration cap, or stagnation: no new best residual and no
/// decrease of the functional (beyond 1e-12 relative) for `stagnation_window`
/// iterations.
CGResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& A,
                            std::span<const double> rhs, double scale, double tol, int max_iter,
                            int stagnation_window = 20);

void write_cg_log(const std::filesystem::path& path, const std::vector<CGRecord>& log);

struct ControlSolution {
  Field3 f;                    // zero outside omega-bar and on slice 0
  Trajectory y;
  double final_residual = 0.0; // ||y(T)|| on ages (delta, A)
  double certificate = 0.0;    // sqrt(2 epsilon J*)
  double J_star = 0.0;
  double control_norm = 0.0;   // ||f||_{L2(Q)}
  double y0_norm = 0.0;
  double bound_ratio = 0.0;    // control_norm / y0_norm, 0 when y0 = 0
  std::vector<CGRecord> cg_log;
  int iterations = 0;
  bool converged = true;

  // Delay composition.
  double t_switch = 0.0;       // T_tilde
  int n_switch = 0;            // control vanishes on slices n <= n_switch
  double intermediate_norm = 0.0;   // ||u(T_tilde)||
  double intermediate_bound = 0.0;  // e^{C T_tilde / 2} ||y0||, C = A |beta|^2
  std::vector<std::string> warnings;

  // Gluing.
  std::vector<double> sub_certificates;
  std::vector<double> sub_control_norms;
  double residual_max = 0.0;      // discrete residual of (y, f) in the scheme
  double consistency_error = 0.0; // same-grid manufactured residual
  double glue_tolerance = 0.0;    // 10 * consistency_error
};

/// Uniform-norm helpers on the target set: nodes with a in (delta, A) and
/// interior x.
std::vector<double> target_mask(const Grid& g, double delta);
double target_norm(const Grid& g, std::span<const double> slice, double delta);

/// Penalized HUM on the grid window [t0, T] of the spec.
ControlSolution hum_control(const ProblemSpec& spec, const HUMConfig& cfg);

/// Free phase on [t0, T - a_bar] then hum_control on [T - a_bar, T]; a_bar is
/// snapped to a multiple of dt with a warning.
ControlSolution compose_delay_control(const ProblemSpec& spec, const HUMConfig& cfg);

/// Subproblems on [0, beta_bar] and [alpha_bar, 1] (snapped to x nodes), a
/// free solve, then y = xi u1 + eta u2 + F phi u3 with F = (T - t)/T.
ControlSolution glue_two_sided(const ProblemSpec& spec, const HUMConfig& cfg, double alpha_bar,
                               double beta_bar);

/// Residual of a smooth manufactured state against its analytic source on the
/// spec grid: the scheme's consistency error at this resolution.
double manufactured_consistency_error(const ProblemSpec& spec);

struct ControlBoundRow {
  int run = 0;
  double y0_norm = 0.0;
  double control_norm = 0.0;
  double bound_ratio = 0.0;
};

struct ControlBoundTable {
  std::vector<ControlBoundRow> rows;  // zero-y0 runs are skipped
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  bool finite = true;
};

ControlBoundTable control_bound_report(const std::vector<ControlSolution>& runs);
void write_control_bound_csv(const std::filesystem::path& path, const ControlBoundTable& t);

/// Control CSV (t,a,x,value) and the residual/norm summary JSON.
void write_control_csv(const std::filesystem::path& path, const ControlSolution& s);
void write_control_summary(const std::filesystem::path& path, const ControlSolution& s,
                           const HUMConfig& cfg);

}  // namespace popctl
