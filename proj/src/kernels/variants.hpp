#pragma once

// Per-ISA kernel entry points. Tests call these directly to check that every
// variant agrees with the scalar reference.

#include "popctl/kernels.hpp"

namespace popctl::kernels {

struct KernelTable {
  void (*solve_tridiag_batched)(const TridiagBatch&);
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*weighted_dot)(std::span<const double>, std::span<const double>,
                         std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*xpby)(std::span<const double>, double, std::span<double>);
};

namespace scalar {
void solve_tridiag_batched(const TridiagBatch& sys);
/// Solves lanes [lane_begin, lane_end) only; used for vector remainders.
void solve_tridiag_lanes(const TridiagBatch& sys, std::size_t lane_begin,
                         std::size_t lane_end);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
const KernelTable& table();
}  // namespace scalar

namespace avx2 {
/// nullptr when the build has no AVX2 variant.
const KernelTable* table();
}  // namespace avx2

namespace neon {
const KernelTable* table();
}  // namespace neon

const KernelTable& table_for(Isa isa);

}  // namespace popctl::kernels
