#pragma once

// Dense double-precision inner loops shared by analysis and motion code.
//
// Every kernel has a scalar reference in foon::kernels::scalar. Vector
// variants (AVX2+FMA on x86-64, NEON on AArch64) live in their own
// translation units and are selected once at runtime. The dispatching entry
// points in foon::kernels route to whichever table is active.

#include <cstddef>
#include <span>
#include <string_view>

namespace foon::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Best instruction set this build and this CPU both support.
Isa detect_isa();

/// Currently selected variant.
Isa active_isa();

/// Select a variant explicitly. Returns false (and changes nothing) when the
/// variant is not compiled in or the CPU lacks it.
bool select_isa(Isa isa);

bool isa_available(Isa isa);

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*sq_diff_accumulate)(const double* row, double x, double* out, std::size_t n);
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
};

const KernelTable& table_for(Isa isa);

// Dispatching wrappers. Spans must have matching extents where paired.

double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out[j] += (row[j] - x)^2
void sq_diff_accumulate(std::span<const double> row, double x, std::span<double> out);

/// max_j |a[j] - b[j]|, 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

double sum_sq(std::span<const double> a);

/// y = M x for a dense row-major rows x cols matrix.
void matvec_rows(std::span<const double> m, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sq_diff_accumulate(const double* row, double x, double* out, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sq_diff_accumulate(const double* row, double x, double* out, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sq_diff_accumulate(const double* row, double x, double* out, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
}  // namespace neon

}  // namespace foon::kernels
