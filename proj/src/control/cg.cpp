#include <cmath>

#include "popctl/control.hpp"
#include "popctl/error.hpp"
#include "popctl/kernels.hpp"
#include "util/io.hpp"

namespace popctl {

CGResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& A,
                            std::span<const double> rhs, double scale, double tol, int max_iter,
                            int stagnation_window) {
  namespace kn = kernels;
  const std::size_t n = rhs.size();
  CGResult out;
  out.x.assign(n, 0.0);
  const double rhs_norm = std::sqrt(scale * kn::dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    out.converged = true;
    out.log.push_back({0, 0.0, 0.0});
    return out;
  }
  std::vector<double> r(rhs.begin(), rhs.end()), p = r, Ap(n);
  double rr = scale * kn::dot(r, r);
  // J(x) = 1/2 <Ax, x> - <rhs, x> = -1/2 <rhs + r, x>
  auto functional = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (rhs[i] + r[i]) * out.x[i];
    return -0.5 * scale * acc;
  };
  out.log.push_back({0, 0.0, 1.0});
  double best = 1.0;
  int best_at = 0;
  for (int it = 1; it <= max_iter; ++it) {
    A(p, Ap);
    const double pAp = scale * kn::dot(p, Ap);
    if (!(pAp > 0.0) || !std::isfinite(pAp))
      throw NumericalError("cg: operator is not positive definite (p'Ap = " + io::num(pAp) + ")");
    const double alpha = rr / pAp;
    kn::axpy(alpha, p, out.x);
    kn::axpy(-alpha, Ap, r);
    const double rr_new = scale * kn::dot(r, r);
    const double rel = std::sqrt(rr_new) / rhs_norm;
    out.iterations = it;
    out.rel_residual = rel;
    out.log.push_back({it, functional(), rel});
    if (rel <= tol) {
      out.converged = true;
      break;
    }
    // The CG residual is not monotone on ill-conditioned systems while the
    // functional is; stagnation needs both to stall over the window.
    if (rel < best) {
      best = rel;
      best_at = it;
    }
    if (it >= stagnation_window && it - best_at >= stagnation_window) {
      const double j_now = out.log.back().functional;
      const double j_then = out.log[static_cast<std::size_t>(it - stagnation_window)].functional;
      if (j_then - j_now <= 1e-12 * std::abs(j_now)) {
        out.stagnated = true;
        break;
      }
    }
    kn::xpby(r, rr_new / rr, p);
    rr = rr_new;
  }
  out.functional = functional();
  return out;
}

void write_cg_log(const std::filesystem::path& path, const std::vector<CGRecord>& log) {
  std::FILE* fp = io::open_out(path);
  std::fputs("iter,functional,residual\n", fp);
  for (const auto& r : log)
    std::fprintf(fp, "%d,%s,%s\n", r.iter, io::num(r.functional).c_str(),
                 io::num(r.residual).c_str());
  std::fclose(fp);
}

}  // namespace popctl
