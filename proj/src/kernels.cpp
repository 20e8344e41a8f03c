#include "foon/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

namespace foon::kernels {

namespace {

constexpr KernelTable kScalar{scalar::dot, scalar::axpy, scalar::sq_diff_accumulate,
                              scalar::max_abs_diff, scalar::sum_sq};
#if defined(FOON_HAVE_AVX2)
constexpr KernelTable kAvx2{avx2::dot, avx2::axpy, avx2::sq_diff_accumulate,
                            avx2::max_abs_diff, avx2::sum_sq};
#endif
#if defined(FOON_HAVE_NEON)
constexpr KernelTable kNeon{neon::dot, neon::axpy, neon::sq_diff_accumulate,
                            neon::max_abs_diff, neon::sum_sq};
#endif

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(FOON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(FOON_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

// FOON_KERNELS=scalar forces the reference path.
Isa initial_isa() {
  if (const char* env = std::getenv("FOON_KERNELS")) {
    const std::string v{env};
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && cpu_has(Isa::Avx2)) return Isa::Avx2;
    if (v == "neon" && cpu_has(Isa::Neon)) return Isa::Neon;
  }
  return detect_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const KernelTable& active() { return table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

Isa detect_isa() {
  if (cpu_has(Isa::Avx2)) return Isa::Avx2;
  if (cpu_has(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return cpu_has(isa); }

bool select_isa(Isa isa) {
  if (!cpu_has(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(FOON_HAVE_AVX2)
    case Isa::Avx2:
      return kAvx2;
#endif
#if defined(FOON_HAVE_NEON)
    case Isa::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void sq_diff_accumulate(std::span<const double> row, double x, std::span<double> out) {
  assert(row.size() == out.size());
  active().sq_diff_accumulate(row.data(), x, out.data(), row.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

double sum_sq(std::span<const double> a) { return active().sum_sq(a.data(), a.size()); }

void matvec_rows(std::span<const double> m, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> y) {
  assert(m.size() == rows * cols && x.size() == cols && y.size() == rows);
  const auto& k = active();
  for (std::size_t r = 0; r < rows; ++r) y[r] = k.dot(m.data() + r * cols, x.data(), cols);
}

}  // namespace foon::kernels
