#include "kernels/variants.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace popctl::kernels::neon {
namespace {

constexpr std::size_t kLanes = 2;

void solve_tridiag_batched(const TridiagBatch& sys) {
  const std::size_t n = sys.n;
  const std::size_t nb = sys.batch;
  if (n == 0) return;
  const std::size_t vec_end = nb - nb % kLanes;
  double* c = sys.work.data();
  double* d = sys.rhs.data();
  const double* diag = sys.diag.data();

  const float64x2_t up0 = vdupq_n_f64(sys.upper[0]);
  for (std::size_t b = 0; b < vec_end; b += kLanes) {
    const float64x2_t m0 = vld1q_f64(diag + b);
    vst1q_f64(c + b, vdivq_f64(up0, m0));
    vst1q_f64(d + b, vdivq_f64(vld1q_f64(d + b), m0));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const float64x2_t lo = vdupq_n_f64(sys.lower[i]);
    const float64x2_t up = vdupq_n_f64(sys.upper[i]);
    const std::size_t row = i * nb;
    const std::size_t prev = row - nb;
    for (std::size_t b = 0; b < vec_end; b += kLanes) {
      // vmulq + vsubq rather than vfmsq to round like the scalar reference.
      const float64x2_t m =
          vsubq_f64(vld1q_f64(diag + row + b), vmulq_f64(lo, vld1q_f64(c + prev + b)));
      vst1q_f64(c + row + b, vdivq_f64(up, m));
      const float64x2_t num =
          vsubq_f64(vld1q_f64(d + row + b), vmulq_f64(lo, vld1q_f64(d + prev + b)));
      vst1q_f64(d + row + b, vdivq_f64(num, m));
    }
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const std::size_t row = i * nb;
    const std::size_t next = row + nb;
    for (std::size_t b = 0; b < vec_end; b += kLanes) {
      vst1q_f64(d + row + b, vsubq_f64(vld1q_f64(d + row + b),
                                       vmulq_f64(vld1q_f64(c + row + b),
                                                 vld1q_f64(d + next + b))));
    }
  }
  if (vec_end < nb) scalar::solve_tridiag_lanes(sys, vec_end, nb);
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t end = n - n % 4;
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < end; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(&a[i]), vld1q_f64(&b[i])));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(&a[i + 2]), vld1q_f64(&b[i + 2])));
  }
  double s = vaddvq_f64(vaddq_f64(lo, hi));
  for (std::size_t i = end; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  const std::size_t n = a.size();
  const std::size_t end = n - n % 4;
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < end; i += 4) {
    const float64x2_t wl = vmulq_f64(vld1q_f64(&w[i]), vld1q_f64(&a[i]));
    const float64x2_t wh = vmulq_f64(vld1q_f64(&w[i + 2]), vld1q_f64(&a[i + 2]));
    lo = vaddq_f64(lo, vmulq_f64(wl, vld1q_f64(&b[i])));
    hi = vaddq_f64(hi, vmulq_f64(wh, vld1q_f64(&b[i + 2])));
  }
  double s = vaddvq_f64(vaddq_f64(lo, hi));
  for (std::size_t i = end; i < n; ++i) s += (w[i] * a[i]) * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const std::size_t end = n - n % 2;
  const float64x2_t va = vdupq_n_f64(alpha);
  for (std::size_t i = 0; i < end; i += 2)
    vst1q_f64(&y[i], vaddq_f64(vld1q_f64(&y[i]), vmulq_f64(va, vld1q_f64(&x[i]))));
  for (std::size_t i = end; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const std::size_t n = x.size();
  const std::size_t end = n - n % 2;
  const float64x2_t vb = vdupq_n_f64(beta);
  for (std::size_t i = 0; i < end; i += 2)
    vst1q_f64(&y[i], vaddq_f64(vld1q_f64(&x[i]), vmulq_f64(vb, vld1q_f64(&y[i]))));
  for (std::size_t i = end; i < n; ++i) y[i] = x[i] + beta * y[i];
}

}  // namespace

const KernelTable* table() {
  static const KernelTable t{&solve_tridiag_batched, &dot, &weighted_dot,
                             &axpy, &xpby};
  return &t;
}

}  // namespace popctl::kernels::neon

#else

namespace popctl::kernels::neon {
const KernelTable* table() { return nullptr; }
}  // namespace popctl::kernels::neon

#endif
