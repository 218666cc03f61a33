#include "kernels/variants.hpp"

namespace popctl::kernels::scalar {

void solve_tridiag_lanes(const TridiagBatch& sys, std::size_t lane_begin,
                         std::size_t lane_end) {
  const std::size_t n = sys.n;
  const std::size_t nb = sys.batch;
  if (n == 0) return;
  double* c = sys.work.data();
  double* d = sys.rhs.data();
  const double* diag = sys.diag.data();

  for (std::size_t b = lane_begin; b < lane_end; ++b) {
    const double m0 = diag[b];
    c[b] = sys.upper[0] / m0;
    d[b] = d[b] / m0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = sys.lower[i];
    const double up = sys.upper[i];
    const std::size_t row = i * nb;
    const std::size_t prev = row - nb;
    for (std::size_t b = lane_begin; b < lane_end; ++b) {
      const double m = diag[row + b] - lo * c[prev + b];
      c[row + b] = up / m;
      d[row + b] = (d[row + b] - lo * d[prev + b]) / m;
    }
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const std::size_t row = i * nb;
    const std::size_t next = row + nb;
    for (std::size_t b = lane_begin; b < lane_end; ++b) {
      d[row + b] = d[row + b] - c[row + b] * d[next + b];
    }
  }
}

void solve_tridiag_batched(const TridiagBatch& sys) {
  solve_tridiag_lanes(sys, 0, sys.batch);
}

// Reductions use four interleaved partial sums combined as (s0+s2)+(s1+s3),
// then the tail in order. The vector variants follow the same order.
double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t end = n - n % 4;
  double p[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < end; i += 4)
    for (std::size_t l = 0; l < 4; ++l) p[l] += a[i + l] * b[i + l];
  double s = (p[0] + p[2]) + (p[1] + p[3]);
  for (std::size_t i = end; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  const std::size_t n = a.size();
  const std::size_t end = n - n % 4;
  double p[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < end; i += 4)
    for (std::size_t l = 0; l < 4; ++l) p[l] += (w[i + l] * a[i + l]) * b[i + l];
  double s = (p[0] + p[2]) + (p[1] + p[3]);
  for (std::size_t i = end; i < n; ++i) s += (w[i] * a[i]) * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

const KernelTable& table() {
  static const KernelTable t{&solve_tridiag_batched, &dot, &weighted_dot,
                             &axpy, &xpby};
  return t;
}

}  // namespace popctl::kernels::scalar
