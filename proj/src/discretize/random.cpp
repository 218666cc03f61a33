#include <cmath>
#include <numbers>
#include <random>

#include "popctl/discretize.hpp"
#include "popctl/error.hpp"

namespace popctl {

Field2 series_final_data(const Grid& g, int modes, std::span<const double> coeffs) {
  if (modes < 1) throw ValidationError("final data: modes must be >= 1");
  if (coeffs.size() != static_cast<std::size_t>(modes * modes))
    throw ValidationError("final data: expected modes^2 coefficients");
  const double pi = std::numbers::pi;
  const double L = g.x_hi - g.x_lo;
  Field2 f(g);
  std::vector<double> ca(static_cast<std::size_t>(modes));
  std::vector<double> sx(static_cast<std::size_t>(modes));
  for (int j = 0; j <= g.Na; ++j) {
    const double a = g.a(j);
    const double taper = (j == g.Na) ? 0.0 : (g.A - a) / g.A;
    for (int m = 0; m < modes; ++m) ca[m] = std::cos(m * pi * a / g.A);
    for (int i = 1; i < g.Nx; ++i) {
      const double xs = (g.x(i) - g.x_lo) / L;
      for (int n = 0; n < modes; ++n) sx[n] = std::sin((n + 1) * pi * xs);
      double s = 0.0;
      for (int m = 0; m < modes; ++m)
        for (int n = 0; n < modes; ++n)
          s += coeffs[static_cast<std::size_t>(m * modes + n)] * ca[m] * sx[n];
      f(j, i) = taper * s;
    }
  }
  return f;
}

Field2 random_final_data(const Grid& g, std::uint64_t seed, int modes, std::uint64_t stream) {
  if (modes < 1) throw ValidationError("final data: modes must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(modes * modes));
  for (int m = 0; m < modes; ++m)
    for (int n = 0; n < modes; ++n)
      c[static_cast<std::size_t>(m * modes + n)] = normal(rng) / ((m + 1.0) * (n + 1.0));
  return series_final_data(g, modes, c);
}

}  // namespace popctl
