#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "popctl/kernels.hpp"
#include "popctl/solver.hpp"

using namespace popctl;
namespace kn = popctl::kernels;

namespace {

std::vector<double> randvec(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& e : v) e = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct IsaGuard {
  kn::Isa saved = kn::active_isa();
  ~IsaGuard() { kn::force_isa(saved); }
};

std::vector<kn::Isa> vector_isas() {
  std::vector<kn::Isa> out;
  for (auto isa : {kn::Isa::avx2, kn::Isa::neon})
    if (kn::isa_supported(isa)) out.push_back(isa);
  return out;
}

}  // namespace

TEST_CASE("unsupported isa falls back to scalar") {
  IsaGuard g;
  kn::Isa other = kn::isa_supported(kn::Isa::avx2) ? kn::Isa::neon : kn::Isa::avx2;
  if (kn::isa_supported(other)) return;
  kn::force_isa(other);
  CHECK(kn::active_isa() == kn::Isa::scalar);
}

TEST_CASE("reductions and updates agree bitwise across variants") {
  IsaGuard g;
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 17u, 1000u}) {
    auto a = randvec(n, 1), b = randvec(n, 2), w = randvec(n, 3, 0.0, 2.0);
    kn::force_isa(kn::Isa::scalar);
    double d0 = kn::dot(a, b), wd0 = kn::weighted_dot(a, b, w);
    auto y0 = b;
    kn::axpy(0.37, a, y0);
    auto z0 = b;
    kn::xpby(a, -1.3, z0);
    for (auto isa : vector_isas()) {
      kn::force_isa(isa);
      CHECK(kn::dot(a, b) == d0);
      CHECK(kn::weighted_dot(a, b, w) == wd0);
      auto y1 = b;
      kn::axpy(0.37, a, y1);
      CHECK(same_bits(y0, y1));
      auto z1 = b;
      kn::xpby(a, -1.3, z1);
      CHECK(same_bits(z0, z1));
    }
  }
}

TEST_CASE("batched tridiagonal solve") {
  IsaGuard g;
  const std::size_t n = 9;
  for (std::size_t batch : {1u, 3u, 4u, 5u, 8u, 13u}) {
    auto lower = randvec(n, 4, -1.0, 0.0), upper = randvec(n, 5, -1.0, 0.0);
    auto diag = randvec(n * batch, 6, 2.5, 4.0);
    auto rhs = randvec(n * batch, 7);

    auto run = [&](kn::Isa isa) {
      kn::force_isa(isa);
      std::vector<double> x = rhs, work(n * batch);
      kn::solve_tridiag_batched({lower, upper, diag, x, work, n, batch});
      return x;
    };
    auto ref = run(kn::Isa::scalar);

    // residual of each system
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        double r = diag[i * batch + b] * ref[i * batch + b];
        if (i > 0) r += lower[i] * ref[(i - 1) * batch + b];
        if (i + 1 < n) r += upper[i] * ref[(i + 1) * batch + b];
        CHECK(r == doctest::Approx(rhs[i * batch + b]).epsilon(1e-13));
      }
    }
    for (auto isa : vector_isas()) CHECK(same_bits(ref, run(isa)));
  }
}

TEST_CASE("whole solves are identical under every variant") {
  IsaGuard g;
  ProblemSpec spec;
  spec.k = DegenerateCoefficient::power_law(0.5, 0.5);
  spec.rates.beta = RateFunction::window(1.0, 0.5, 2.0);
  spec.rates.mu = RateFunction::constant(0.2);
  spec.grid = Grid{1.0, 2.0, 12, 24, 15};
  spec.y0 = random_final_data(spec.grid, 3, 3);
  Field2 vT = random_final_data(spec.grid, 4, 3);

  kn::force_isa(kn::Isa::scalar);
  auto y = solve_forward(spec).state.values;
  auto v = solve_adjoint(spec, vT).v.state.values;
  for (auto isa : vector_isas()) {
    kn::force_isa(isa);
    CHECK(same_bits(y, solve_forward(spec).state.values));
    CHECK(same_bits(v, solve_adjoint(spec, vT).v.state.values));
  }
}
