#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "foon/kernels.hpp"

using namespace foon::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

}  // namespace

TEST_CASE("scalar kernels on hand-computed inputs") {
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(scalar::dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
  CHECK(scalar::sum_sq(a.data(), 3) == doctest::Approx(14.0));
  CHECK(scalar::max_abs_diff(a.data(), b.data(), 3) == doctest::Approx(7.0));
  CHECK(scalar::max_abs_diff(a.data(), b.data(), 0) == 0.0);

  std::vector<double> y{1, 1, 1};
  scalar::axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});

  std::vector<double> acc{0, 1, 0};
  scalar::sq_diff_accumulate(a.data(), 2.0, acc.data(), 3);
  CHECK(acc == std::vector<double>{1, 1, 1});
}

TEST_CASE("vector variants agree with the scalar reference") {
  std::mt19937_64 rng(7);
  const auto isas = vector_isas();
  if (isas.empty()) MESSAGE("no vector ISA on this machine; only scalar covered");
  for (Isa isa : isas) {
    CAPTURE(isa_name(isa));
    const auto& k = table_for(isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      const auto a = random_vec(rng, n);
      const auto b = random_vec(rng, n);
      const double scale = 1.0 + scalar::sum_sq(a.data(), n) + scalar::sum_sq(b.data(), n);

      CHECK(std::abs(k.dot(a.data(), b.data(), n) - scalar::dot(a.data(), b.data(), n)) <= 1e-13 * scale);
      CHECK(std::abs(k.sum_sq(a.data(), n) - scalar::sum_sq(a.data(), n)) <= 1e-13 * scale);
      CHECK(k.max_abs_diff(a.data(), b.data(), n) == scalar::max_abs_diff(a.data(), b.data(), n));

      auto y1 = b, y2 = b;
      k.axpy(0.37, a.data(), y1.data(), n);
      scalar::axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1 + std::abs(y2[i])));

      auto c1 = b, c2 = b;
      k.sq_diff_accumulate(a.data(), 0.5, c1.data(), n);
      scalar::sq_diff_accumulate(a.data(), 0.5, c2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(c1[i] - c2[i]) <= 1e-14 * (1 + std::abs(c2[i])));
    }
  }
}

TEST_CASE("runtime selection") {
  const Isa before = active_isa();
  CHECK(select_isa(Isa::Scalar));
  CHECK(active_isa() == Isa::Scalar);
  const std::vector<double> a{1, 2}, b{3, 4};
  CHECK(dot(a, b) == 11.0);
  if (!isa_available(Isa::Neon)) CHECK_FALSE(select_isa(Isa::Neon));
  CHECK(select_isa(before));
  CHECK(active_isa() == before);
}

TEST_CASE("matvec_rows") {
  const std::vector<double> m{1, 2, 3, 4, 5, 6};  // 2 x 3
  const std::vector<double> x{1, 0, -1};
  std::vector<double> y(2);
  matvec_rows(m, 2, 3, x, y);
  CHECK(y == std::vector<double>{-2, -2});
}
