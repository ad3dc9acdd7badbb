#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rrte/special_functions.hpp"

using namespace rrte;

namespace {

// Racah-sum oracle in plain long double arithmetic, independent of the
// log-gamma production path.
long double factl(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double cg_oracle(int j1, int m1, int j2, int m2, int j3, int m3) {
  if (m3 != m1 + m2 || j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  long double pref = std::sqrt((2.0L * j3 + 1) * factl(j3 + j1 - j2) * factl(j3 - j1 + j2) *
                               factl(j1 + j2 - j3) / factl(j1 + j2 + j3 + 1) *
                               factl(j3 + m3) * factl(j3 - m3) * factl(j1 - m1) *
                               factl(j1 + m1) * factl(j2 - m2) * factl(j2 + m2));
  long double s = 0.0L;
  for (int k = 0; k <= j1 + j2 - j3; ++k) {
    if (j1 - m1 - k < 0 || j2 + m2 - k < 0 || j3 - j2 + m1 + k < 0 || j3 - j1 - m2 + k < 0)
      continue;
    long double t = factl(k) * factl(j1 + j2 - j3 - k) * factl(j1 - m1 - k) *
                    factl(j2 + m2 - k) * factl(j3 - j2 + m1 + k) * factl(j3 - j1 - m2 + k);
    s += (k % 2 == 0 ? 1.0L : -1.0L) / t;
  }
  return double(pref * s);
}

// Legendre polynomial by the recurrence, the oracle for d^l_00
double legendre_p(int l, double x) {
  double p0 = 1.0, p1 = x;
  if (l == 0) return p0;
  for (int j = 2; j <= l; ++j) {
    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// P_l^m(x) for x >= 1 by the standard recurrence (cross-check oracle for the
// d-identity route)
double plm_recurrence(int l, int m, double x) {
  double pmm = 1.0;
  const double s = std::sqrt(x * x - 1.0);
  for (int k = 1; k <= m; ++k) pmm *= (2.0 * k - 1.0) * s;
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

}  // namespace

TEST_CASE("clebsch_gordan spot values") {
  CHECK(clebsch_gordan(0, 0, 0, 0, 0, 0) == doctest::Approx(1.0));
  // values confirmed by the Racah-sum oracle
  CHECK(cg_oracle(1, 0, 1, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(clebsch_gordan(1, 0, 1, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(cg_oracle(1, 1, 1, -1, 0, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(clebsch_gordan(2, 1, 3, -1, 4, 0) == doctest::Approx(cg_oracle(2, 1, 3, -1, 4, 0)));
  CHECK(clebsch_gordan(1, 1, 1, 1, 2, 1) == 0.0);  // m3 != m1+m2
  CHECK(clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0);  // triangle violated
  CHECK_THROWS_AS(clebsch_gordan(-1, 0, 0, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("clebsch_gordan orthogonality") {
  double err = 0.0;
  for (int j1 = 0; j1 <= 4; ++j1)
    for (int j2 = 0; j2 <= 4; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3)
        for (int j3p = std::abs(j1 - j2); j3p <= j1 + j2; ++j3p) {
          const int mmax = std::min(j3, j3p);
          for (int m3 = -mmax; m3 <= mmax; ++m3) {
            double s = 0.0;
            for (int m1 = -j1; m1 <= j1; ++m1) {
              const int m2 = m3 - m1;
              if (std::abs(m2) > j2) continue;
              s += clebsch_gordan(j1, m1, j2, m2, j3, m3) *
                   clebsch_gordan(j1, m1, j2, m2, j3p, m3);
            }
            err = std::max(err, std::abs(s - (j3 == j3p ? 1.0 : 0.0)));
          }
        }
  CHECK(err < 1e-12);
}

TEST_CASE("clebsch_gordan M-sign symmetry") {
  for (int l = 0; l <= 6; ++l)
    for (int lp = 0; lp <= 6; ++lp)
      for (int L = std::abs(l - lp); L <= l + lp; ++L)
        for (int M = -std::min(l, lp); M <= std::min(l, lp); ++M) {
          const double a = clebsch_gordan(l, M, lp, -M, L, 0);
          const double b = clebsch_gordan(l, -M, lp, M, L, 0);
          const double sg = ((l + lp + L) % 2 == 0) ? 1.0 : -1.0;
          CHECK(a == doctest::Approx(sg * b).epsilon(1e-12));
        }
}

TEST_CASE("wigner_d_real basics") {
  // d(0) = identity
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m)
      for (int mp = -l; mp <= l; ++mp)
        CHECK(wigner_d_real(l, m, mp, 0.0) == doctest::Approx(m == mp ? 1.0 : 0.0));
  // the 3x3 rotation-matrix oracle for l = 1: d^1_00 = cos(beta)
  for (double beta : {0.3, 1.1, 2.2})
    CHECK(wigner_d_real(1, 0, 0, beta) == doctest::Approx(std::cos(beta)));
  // d^l_00 = P_l(cos beta)
  for (int l = 0; l <= 6; ++l)
    for (double beta : {0.3, 1.1})
      CHECK(wigner_d_real(l, 0, 0, beta) == doctest::Approx(legendre_p(l, std::cos(beta))));
  CHECK_THROWS_AS(wigner_d_real(1, 2, 0, 0.5), std::invalid_argument);
}

TEST_CASE("wigner_d unitarity") {
  const double beta = 0.921;
  for (int l = 0; l <= 8; ++l) {
    for (int m = -l; m <= l; ++m)
      for (int mp = -l; mp <= l; ++mp) {
        double s = 0.0;
        for (int k = -l; k <= l; ++k)
          s += wigner_d_real(l, m, k, beta) * wigner_d_real(l, mp, k, beta);
        CHECK(std::abs(s - (m == mp ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("wigner_d_complex reduces to the real case at x = 0") {
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m)
      for (int mp = -l; mp <= l; ++mp) {
        const cdouble v = wigner_d_complex(l, m, mp, ComplexRotationAngle(0.0));
        CHECK(std::abs(v - cdouble(m == mp ? 1.0 : 0.0)) < 1e-14);
      }
}

TEST_CASE("wigner_d_complex l = 1 cosine element") {
  const double x = 0.8;
  const cdouble v = wigner_d_complex(1, 0, 0, ComplexRotationAngle(x));
  CHECK(v.real() == doctest::Approx(std::sqrt(1.0 + x * x)));
  CHECK(v.imag() == doctest::Approx(0.0));
}

TEST_CASE("complex-angle product parity") {
  // the +-M paired product is real when m+m' is even and imaginary otherwise
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> li(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const int l = li(rng), lp = li(rng);
    std::uniform_int_distribution<int> mi(-l, l), mpi(-lp, lp), Mi(0, std::min(l, lp));
    const int m = l ? mi(rng) : 0;
    const int mp = lp ? mpi(rng) : 0;
    const int M = std::min(l, lp) ? Mi(rng) : 0;
    const ComplexRotationAngle ang(0.9);
    const cdouble s = wigner_d_complex(l, m, M, ang) * wigner_d_complex(lp, mp, M, ang) +
                      wigner_d_complex(l, m, -M, ang) * wigner_d_complex(lp, mp, -M, ang);
    if ((m + mp) % 2 == 0)
      CHECK(std::abs(s.imag()) < 1e-12 * (1.0 + std::abs(s)));
    else
      CHECK(std::abs(s.real()) < 1e-12 * (1.0 + std::abs(s)));
  }
}

TEST_CASE("ComplexRotationAngle invariant") {
  for (double x : {0.0, 0.3, 2.0, 14.0}) {
    ComplexRotationAngle a(x);
    CHECK(a.cos_val >= 1.0);
    const cdouble c2 = cdouble(a.cos_val) * a.cos_val + a.sin_val() * a.sin_val();
    CHECK(std::abs(c2 - 1.0) < 1e-12);
  }
}

TEST_CASE("modified_spherical_bessel_k closed forms and recurrence") {
  for (double x : {0.5, 2.0, 10.0}) {
    CHECK(modified_spherical_bessel_k(0, x) == doctest::Approx(std::exp(-x) / x));
    CHECK(modified_spherical_bessel_k(1, x) ==
          doctest::Approx(std::exp(-x) * (1.0 / x + 1.0 / (x * x))));
    for (int n = 1; n <= 30; ++n) {
      const double lhs = modified_spherical_bessel_k(n + 1, x);
      const double rhs = modified_spherical_bessel_k(n - 1, x) +
                         (2.0 * n + 1.0) / x * modified_spherical_bessel_k(n, x);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
    }
  }
  CHECK_THROWS_AS(modified_spherical_bessel_k(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(modified_spherical_bessel_k(0, -1.0), std::domain_error);
}

TEST_CASE("bessel k decreasing in x and log-convex") {
  for (int n : {0, 2, 5}) {
    double prev = modified_spherical_bessel_k(n, 0.2);
    std::vector<double> logs;
    for (double x = 0.2; x <= 5.0; x += 0.2) {
      const double v = modified_spherical_bessel_k(n, x);
      CHECK(v <= prev * (1.0 + 1e-14));
      CHECK(v > 0.0);
      logs.push_back(std::log(v));
      prev = v;
    }
    for (std::size_t i = 1; i + 1 < logs.size(); ++i)
      CHECK(logs[i - 1] + logs[i + 1] - 2.0 * logs[i] >= -1e-10);
  }
}

TEST_CASE("bessel k log array matches direct values and survives overflow") {
  std::vector<double> lg(81);
  modified_spherical_bessel_k_log(80, 0.43, lg);
  for (int n = 0; n <= 40; ++n) {
    const double direct = modified_spherical_bessel_k(n, 0.43);
    CHECK(lg[n] == doctest::Approx(std::log(direct)).epsilon(1e-12));
  }
  CHECK(lg[80] > 300.0);
  CHECK(std::isfinite(lg[80]));
  // k_150(0.2) overflows a double but the log stays finite
  std::vector<double> lg2(151);
  modified_spherical_bessel_k_log(150, 0.2, lg2);
  CHECK(lg2[150] > 710.0);
  CHECK(std::isfinite(lg2[150]));
}

TEST_CASE("assoc_legendre for x >= 1") {
  CHECK(assoc_legendre(2, 0, 1.25) == doctest::Approx((3.0 * 1.25 * 1.25 - 1.0) / 2.0));
  for (int l = 0; l <= 6; ++l)
    for (int m = 0; m <= l; ++m)
      CHECK(assoc_legendre(l, m, 1.0) == doctest::Approx(m == 0 ? 1.0 : 0.0));
  // recurrence oracle across a grid
  for (double x : {1.05, 1.25, 2.5})
    for (int l = 0; l <= 8; ++l)
      for (int m = 0; m <= l; ++m)
        CHECK(assoc_legendre(l, m, x) ==
              doctest::Approx(plm_recurrence(l, m, x)).epsilon(1e-11));
  CHECK_THROWS_AS(assoc_legendre(2, 0, 0.99), std::domain_error);
}

TEST_CASE("spherical harmonics") {
  CHECK(spherical_harmonic(0, 0, 0.3, 0.7).real() ==
        doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)));
  // Y_lm(theta = 0) = delta_m0 sqrt((2l+1)/4pi)
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) {
      const cdouble v = spherical_harmonic(l, m, 0.0, 0.0);
      const double expect = m == 0 ? std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI)) : 0.0;
      CHECK(std::abs(v - cdouble(expect)) < 1e-14);
    }
  // normalization: |Y_lm|^2 is azimuth-free, integrate cos(theta) by Simpson
  const int nth = 2000;
  for (int l = 0; l <= 8; ++l)
    for (int m = -l; m <= l; ++m) {
      double s = 0.0;
      const double h = 2.0 / nth;
      for (int i = 0; i <= nth; ++i) {
        const double c = -1.0 + h * i;
        const double w = (i == 0 || i == nth) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::norm(spherical_harmonic(l, m, std::acos(c), 0.4));
      }
      s *= 2.0 * M_PI * h / 3.0;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
    }
  // Condon-Shortley: Y_11 has the minus sign
  const cdouble y11 = spherical_harmonic(1, 1, M_PI / 2, 0.0);
  CHECK(y11.real() == doctest::Approx(-std::sqrt(3.0 / (8.0 * M_PI))));
}

TEST_CASE("half_range_overlap") {
  CHECK(half_range_overlap(0, 0, 0, 0) == doctest::Approx(0.5));
  CHECK(half_range_overlap(1, 0, 1, 0) == doctest::Approx(0.5));
  CHECK(half_range_overlap(2, 1, 2, 2) == 0.0);  // m != m'
  CHECK(half_range_overlap(0, 0, 1, 0) == doctest::Approx(std::sqrt(3.0) / 4.0));
  // closed forms for odd m up to l = 3: <1 1|B|1 1> = 1/2 etc.
  CHECK(half_range_overlap(1, 1, 1, 1) == doctest::Approx(0.5));
  CHECK(half_range_overlap(3, 1, 3, 1) == doctest::Approx(0.5));
  CHECK(half_range_overlap(1, 1, 2, 1) == doctest::Approx(3.0 * std::sqrt(5.0) / 16.0));
  // half-range parity: zero for l != l' with l + l' even
  for (int m = 0; m <= 3; ++m)
    for (int l = m; l <= 12; ++l)
      for (int lp = m; lp <= 12; ++lp)
        if (l != lp && (l + lp) % 2 == 0)
          CHECK(std::abs(half_range_overlap(l, m, lp, m)) < 1e-12);
  // diagonal elements are 1/2 (hemisphere half of the full norm)
  for (int l = 0; l <= 12; ++l)
    for (int m = 0; m <= l; m += std::max(1, l / 2))
      CHECK(half_range_overlap(l, m, l, m) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("HalfRangeOverlapTable equals the element function") {
  HalfRangeOverlapTable tab(7);
  for (int m = -7; m <= 7; ++m)
    for (int l = std::abs(m); l <= 7; ++l)
      for (int lp = std::abs(m); lp <= 7; ++lp)
        CHECK(tab(l, m, lp, m) == doctest::Approx(half_range_overlap(l, m, lp, m)));
}

TEST_CASE("A4 triple-d integral identity") {
  // int_0^pi d^l_mM d^l'_mM d^L_00 sin = 2(-1)^{m-M}/(2L+1) C^{L0}_{l,m,l',-m} C^{L0}_{l,M,l',-M}
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> li(0, 5);
  const int nth = 200;
  for (int trial = 0; trial < 25; ++trial) {
    const int l = li(rng), lp = li(rng);
    const int lb = std::min(l, lp);
    std::uniform_int_distribution<int> mi(-lb, lb);
    const int m = lb ? mi(rng) : 0;
    const int M = lb ? mi(rng) : 0;
    std::uniform_int_distribution<int> Li(std::abs(l - lp), l + lp);
    const int L = Li(rng);
    double I = 0.0;
    for (int i = 0; i < nth; ++i) {
      const double c = -1.0 + 2.0 * (i + 0.5) / nth;
      const double th = std::acos(c);
      I += wigner_d_real(l, m, M, th) * wigner_d_real(lp, m, M, th) *
           wigner_d_real(L, 0, 0, th) * (2.0 / nth);
    }
    const double rhs = 2.0 * (((m - M) % 2 == 0) ? 1.0 : -1.0) / (2.0 * L + 1.0) *
                       clebsch_gordan(l, m, lp, -m, L, 0) *
                       clebsch_gordan(l, M, lp, -M, L, 0);
    CHECK(I == doctest::Approx(rhs).epsilon(5e-4).scale(1.0));
  }
}
