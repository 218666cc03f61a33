#pragma once

// Uniform (t, a, x) grids, node-valued fields, quadrature and test data.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace popctl {

/// Uniform tensor grid on [t0,T] x [0,A] x [x_lo,x_hi] with Nt, Na, Nx cells.
/// Node indices run 0..N inclusive in every direction.
struct Grid {
  double T = 1.0;
  double A = 2.0;
  int Nt = 24;
  int Na = 48;
  int Nx = 24;
  bool dt_equals_da = true;
  double t0 = 0.0;
  double x_lo = 0.0;
  double x_hi = 1.0;

  double dt() const { return (T - t0) / Nt; }
  double da() const { return A / Na; }
  double dx() const { return (x_hi - x_lo) / Nx; }
  double t(int n) const { return t0 + n * dt(); }
  double a(int j) const { return j * da(); }
  double x(int i) const { return x_lo + i * dx(); }

  std::size_t slice_size() const {
    return static_cast<std::size_t>(Na + 1) * static_cast<std::size_t>(Nx + 1);
  }

  /// Throws ValidationError on nonpositive counts or lengths, or when
  /// dt_equals_da is set and the two steps differ beyond round-off.
  void validate() const;

  /// Same spacing in t and a with T = t0 + Nt*dt; used for the cube grids of
  /// the audits where T = A.
  static Grid cube(double T, int N);
};

/// Values on the (age, space) nodes of a grid: index j*(Nx+1) + i.
struct Field2 {
  int Na = 0;
  int Nx = 0;
  std::vector<double> values;

  Field2() = default;
  Field2(int na, int nx, double fill = 0.0);
  explicit Field2(const Grid& g, double fill = 0.0) : Field2(g.Na, g.Nx, fill) {}

  double& operator()(int j, int i) { return values[idx(j, i)]; }
  double operator()(int j, int i) const { return values[idx(j, i)]; }
  std::size_t idx(int j, int i) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(Nx + 1) +
           static_cast<std::size_t>(i);
  }
  std::span<double> level(int j) {
    return {values.data() + idx(j, 0), static_cast<std::size_t>(Nx + 1)};
  }
  std::span<const double> level(int j) const {
    return {values.data() + idx(j, 0), static_cast<std::size_t>(Nx + 1)};
  }
};

/// Values on all (time, age, space) nodes: index (n*(Na+1) + j)*(Nx+1) + i.
struct Field3 {
  int Nt = 0;
  int Na = 0;
  int Nx = 0;
  std::vector<double> values;

  Field3() = default;
  Field3(int nt, int na, int nx, double fill = 0.0);
  explicit Field3(const Grid& g, double fill = 0.0) : Field3(g.Nt, g.Na, g.Nx, fill) {}

  std::size_t slice_size() const {
    return static_cast<std::size_t>(Na + 1) * static_cast<std::size_t>(Nx + 1);
  }
  std::size_t idx(int n, int j, int i) const {
    return static_cast<std::size_t>(n) * slice_size() +
           static_cast<std::size_t>(j) * static_cast<std::size_t>(Nx + 1) +
           static_cast<std::size_t>(i);
  }
  double& operator()(int n, int j, int i) { return values[idx(n, j, i)]; }
  double operator()(int n, int j, int i) const { return values[idx(n, j, i)]; }

  std::span<double> slice(int n) { return {values.data() + idx(n, 0, 0), slice_size()}; }
  std::span<const double> slice(int n) const {
    return {values.data() + idx(n, 0, 0), slice_size()};
  }
  Field2 at(int n) const;
  void set(int n, const Field2& f);
};

/// Sample a function of (a, x) / (t, a, x) on the grid nodes.
Field2 sample(const Grid& g, const std::function<double(double a, double x)>& fn);
Field3 sample(const Grid& g, const std::function<double(double t, double a, double x)>& fn);

// ---- quadrature ----------------------------------------------------------

/// Weight for weighted_norm. An empty function means weight 1.
struct WeightSpec {
  std::function<double(double a, double x)> weight;
  /// Evaluate the weight at the cell midpoint in the first and last x cells,
  /// for weights like k/x^2 that are integrable but infinite at the endpoint.
  bool midpoint_at_endpoints = false;
};

/// Composite trapezoid value of  int int w * f^2 da dx  over the grid.
/// This is the squared weighted L2 norm. Throws ValidationError on a
/// non-finite weight at a node that is used.
double weighted_norm(const Field2& f, const Grid& g, const WeightSpec& w = {});

/// Same over (t, a, x) with a weight of (t, a, x).
double weighted_norm(const Field3& f, const Grid& g,
                     const std::function<double(double t, double a, double x)>& w = {});

/// Trapezoid weights for n cells of width h (n+1 nodes).
std::vector<double> trapezoid_weights(int n, double h);

/// Integral of f on [lo, hi] by double-exponential (tanh-sinh) quadrature,
/// robust to integrable endpoint singularities. The integrand receives
/// (x, x-lo, hi-x) with the distances computed without cancellation.
double integrate_singular(
    const std::function<double(double x, double dist_lo, double dist_hi)>& f,
    double lo, double hi, double tol = 1e-13);

// ---- test data -----------------------------------------------------------

/// (A-a)/A * sum_{m,n<=modes} c_mn cos((m-1) pi a / A) sin(n pi (x-x_lo)/(x_hi-x_lo)),
/// c_mn ~ N(0,1)/(m n). Deterministic in (seed, stream). Zero at a = A and at
/// the x endpoints.
Field2 random_final_data(const Grid& g, std::uint64_t seed, int modes,
                         std::uint64_t stream = 0);

/// Same series with explicit coefficients, coeffs[(m-1)*modes + (n-1)].
Field2 series_final_data(const Grid& g, int modes, std::span<const double> coeffs);

// ---- snapshots -----------------------------------------------------------

/// CSV with header t,a,x,value in time-age-space order.
void write_csv(const std::filesystem::path& path, const Field3& f, const Grid& g);
void write_csv(const std::filesystem::path& path, const Field2& f, const Grid& g,
               double t);

/// Little-endian int32 header (Nt, Na, Nx, version) then float64 values.
void write_binary(const std::filesystem::path& path, const Field3& f);
Field3 read_binary(const std::filesystem::path& path);

inline constexpr std::int32_t kSnapshotVersion = 1;

}  // namespace popctl
