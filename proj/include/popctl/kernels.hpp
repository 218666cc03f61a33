#pragma once

// Data-parallel inner loops shared by the solver, the audits and the CG
// driver. Each kernel has a scalar reference and vector variants; the active
// variant is picked once at runtime from the host CPU.

#include <cstddef>
#include <span>
#include <string_view>

namespace popctl::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Variant used by the dispatching entry points below. Resolved on first use
/// from the CPU, or from POPCTL_ISA=scalar|avx2|neon when set.
Isa active_isa();

/// Overrides the dispatch choice; an unsupported request falls back to scalar.
void force_isa(Isa isa);

bool isa_supported(Isa isa);

/// A batch of tridiagonal systems of size n sharing the off-diagonals.
/// Per-system data is interleaved: entry i of system b lives at i*batch + b,
/// so consecutive systems occupy consecutive vector lanes.
struct TridiagBatch {
  std::span<const double> lower;  // n entries, lower[0] unused
  std::span<const double> upper;  // n entries, upper[n-1] unused
  std::span<const double> diag;   // n*batch
  std::span<double> rhs;          // n*batch, overwritten with the solution
  std::span<double> work;         // n*batch scratch
  std::size_t n = 0;
  std::size_t batch = 0;
};

/// Thomas elimination without pivoting (callers pass M-matrices).
/// All variants round identically, so results are bitwise equal.

void solve_tridiag_batched(const TridiagBatch& sys);

/// Reductions accumulate four interleaved partial sums, combined as
/// (s0 + s2) + (s1 + s3), then add the tail in order. Every variant uses this
/// order, so reductions are bitwise equal too.
double dot(std::span<const double> a, std::span<const double> b);

/// sum_i w_i a_i b_i
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// y = x + beta * y  (CG direction update)
void xpby(std::span<const double> x, double beta, std::span<double> y);

}  // namespace popctl::kernels
