#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels/variants.hpp"

namespace popctl::kernels {
namespace {

constexpr int kUnresolved = -1;
std::atomic<int> g_isa{kUnresolved};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("POPCTL_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    if (v == "neon" && isa_supported(Isa::neon)) return Isa::neon;
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& active() { return table_for(active_isa()); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    case Isa::scalar: break;
  }
  return "scalar";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return avx2::table() != nullptr && cpu_has_avx2();
    case Isa::neon: return neon::table() != nullptr;
  }
  return false;
}

Isa active_isa() {
  int v = g_isa.load(std::memory_order_acquire);
  if (v == kUnresolved) {
    v = static_cast<int>(detect());
    g_isa.store(v, std::memory_order_release);
  }
  return static_cast<Isa>(v);
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) isa = Isa::scalar;
  g_isa.store(static_cast<int>(isa), std::memory_order_release);
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::avx2 && isa_supported(Isa::avx2)) return *avx2::table();
  if (isa == Isa::neon && isa_supported(Isa::neon)) return *neon::table();
  return scalar::table();
}

void solve_tridiag_batched(const TridiagBatch& sys) { active().solve_tridiag_batched(sys); }

double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a, b);
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  return active().weighted_dot(a, b, w);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x, y);
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  active().xpby(x, beta, y);
}

}  // namespace popctl::kernels
