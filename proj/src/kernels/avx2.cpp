#include "kernels/variants.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace popctl::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

void solve_tridiag_batched(const TridiagBatch& sys) {
  const std::size_t n = sys.n;
  const std::size_t nb = sys.batch;
  if (n == 0) return;
  const std::size_t vec_end = nb - nb % kLanes;
  double* c = sys.work.data();
  double* d = sys.rhs.data();
  const double* diag = sys.diag.data();

  const __m256d up0 = _mm256_set1_pd(sys.upper[0]);
  for (std::size_t b = 0; b < vec_end; b += kLanes) {
    const __m256d m0 = _mm256_loadu_pd(diag + b);
    _mm256_storeu_pd(c + b, _mm256_div_pd(up0, m0));
    _mm256_storeu_pd(d + b, _mm256_div_pd(_mm256_loadu_pd(d + b), m0));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const __m256d lo = _mm256_set1_pd(sys.lower[i]);
    const __m256d up = _mm256_set1_pd(sys.upper[i]);
    const std::size_t row = i * nb;
    const std::size_t prev = row - nb;
    for (std::size_t b = 0; b < vec_end; b += kLanes) {
      const __m256d m = _mm256_sub_pd(_mm256_loadu_pd(diag + row + b),
                                      _mm256_mul_pd(lo, _mm256_loadu_pd(c + prev + b)));
      _mm256_storeu_pd(c + row + b, _mm256_div_pd(up, m));
      const __m256d num = _mm256_sub_pd(_mm256_loadu_pd(d + row + b),
                                        _mm256_mul_pd(lo, _mm256_loadu_pd(d + prev + b)));
      _mm256_storeu_pd(d + row + b, _mm256_div_pd(num, m));
    }
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const std::size_t row = i * nb;
    const std::size_t next = row + nb;
    for (std::size_t b = 0; b < vec_end; b += kLanes) {
      const __m256d v = _mm256_sub_pd(
          _mm256_loadu_pd(d + row + b),
          _mm256_mul_pd(_mm256_loadu_pd(c + row + b), _mm256_loadu_pd(d + next + b)));
      _mm256_storeu_pd(d + row + b, v);
    }
  }
  if (vec_end < nb) scalar::solve_tridiag_lanes(sys, vec_end, nb);
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t end = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < end; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
  double s = hsum(acc);
  for (std::size_t i = end; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  const std::size_t n = a.size();
  const std::size_t end = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < end; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&a[i]));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wa, _mm256_loadu_pd(&b[i])));
  }
  double s = hsum(acc);
  for (std::size_t i = end; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const std::size_t end = n - n % 4;
  const __m256d va = _mm256_set1_pd(alpha);
  for (std::size_t i = 0; i < end; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(&y[i]),
                                    _mm256_mul_pd(va, _mm256_loadu_pd(&x[i])));
    _mm256_storeu_pd(&y[i], r);
  }
  for (std::size_t i = end; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const std::size_t n = x.size();
  const std::size_t end = n - n % 4;
  const __m256d vb = _mm256_set1_pd(beta);
  for (std::size_t i = 0; i < end; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(&x[i]),
                                    _mm256_mul_pd(vb, _mm256_loadu_pd(&y[i])));
    _mm256_storeu_pd(&y[i], r);
  }
  for (std::size_t i = end; i < n; ++i) y[i] = x[i] + beta * y[i];
}

}  // namespace

const KernelTable* table() {
  static const KernelTable t{&solve_tridiag_batched, &dot, &weighted_dot,
                             &axpy, &xpby};
  return &t;
}

}  // namespace popctl::kernels::avx2

#else

namespace popctl::kernels::avx2 {
const KernelTable* table() { return nullptr; }
}  // namespace popctl::kernels::avx2

#endif
