#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "rrte/kernels.hpp"

using namespace rrte;

TEST_CASE("dispatched kernels match the scalar reference") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  INFO("active implementation: " << kernels::active_implementation());
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 501u, 1000u}) {
    std::vector<double> a(n), b(n), w(n);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    for (auto& x : w) x = u(rng);
    const double ref = kernels::detail::dot_scalar(a.data(), b.data(), n);
    const double got = kernels::dot(a.data(), b.data(), n);
    CHECK(got == doctest::Approx(ref).epsilon(1e-13));
    const double ref3 = kernels::detail::dot3_scalar(a.data(), b.data(), w.data(), n);
    const double got3 = kernels::dot3(a.data(), b.data(), w.data(), n);
    CHECK(got3 == doctest::Approx(ref3).epsilon(1e-13));
  }
}

TEST_CASE("complex kernels match the scalar reference") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {0u, 1u, 2u, 5u, 63u, 200u}) {
    std::vector<std::complex<double>> a(n), b(n), y1(n), y2(n);
    for (auto& x : a) x = {u(rng), u(rng)};
    for (auto& x : b) x = {u(rng), u(rng)};
    for (std::size_t i = 0; i < n; ++i) y1[i] = y2[i] = {u(rng), u(rng)};
    auto ref = kernels::detail::cdot_scalar(a.data(), b.data(), n);
    auto got = kernels::cdot(a.data(), b.data(), n);
    CHECK(std::abs(ref - got) <= 1e-13 * (1.0 + std::abs(ref)));
    const std::complex<double> s{0.3, -1.1};
    kernels::detail::caxpy_scalar(s, a.data(), y1.data(), n);
    kernels::caxpy(s, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1.0 + std::abs(y1[i])));
  }
}

TEST_CASE("kernels handle factorially large weights") {
  // values near the double range still reduce correctly
  std::vector<double> a{1e-150, -2e-150, 3e-150};
  std::vector<double> b{1e-150, 2e-150, 1e-150};
  std::vector<double> w{1e290, 1e290, 1e290};
  const double got = kernels::dot3(a.data(), b.data(), w.data(), 3);
  CHECK(got == doctest::Approx(0.0).epsilon(1e-12));
}
