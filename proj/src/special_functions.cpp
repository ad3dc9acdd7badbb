#include "rrte/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace rrte {

namespace detail {

double log_factorial(int n) {
  static std::vector<double> table = [] {
    std::vector<double> t(1024);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(double(i));
    return t;
  }();
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (std::size_t(n) < table.size()) return table[n];
  return std::lgamma(double(n) + 1.0);
}

namespace {

// Jacobi polynomial P_s^{(u,v)}(z) by three-term recurrence, complex z.
cdouble jacobi_poly(int s, int u, int v, cdouble z) {
  if (s < 0) return 0.0;
  cdouble p0 = 1.0;
  if (s == 0) return p0;
  cdouble p1 = 0.5 * (u - v) + (1.0 + 0.5 * (u + v)) * z;
  for (int n = 2; n <= s; ++n) {
    double a = 2.0 * n * (n + u + v) * (2.0 * n + u + v - 2.0);
    double b = (2.0 * n + u + v - 1.0) * (double(u) * u - double(v) * v);
    double c = (2.0 * n + u + v - 2.0) * (2.0 * n + u + v - 1.0) * (2.0 * n + u + v);
    double d = 2.0 * (n + u - 1.0) * (n + v - 1.0) * (2.0 * n + u + v);
    cdouble p2 = ((b + c * z) * p1 - d * p0) / a;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

cdouble wigner_d_from_cos(int l, int m, int mp, cdouble cos_theta, int branch) {
  if (std::abs(m) > l || std::abs(mp) > l) return 0.0;
  const int u = std::abs(m - mp);
  const int v = std::abs(m + mp);
  const int s = l - (u + v) / 2;
  const double xi = (m <= mp) ? 1.0 : ((u % 2 == 0) ? 1.0 : -1.0);
  const double logZ = 0.5 * (log_factorial(s) + log_factorial(s + u + v) -
                             log_factorial(s + u) - log_factorial(s + v));
  const double hm = 1.0 - cos_theta.real();  // 2 sin^2(theta/2), may be negative
  const double hp = 1.0 + cos_theta.real();  // 2 cos^2(theta/2)
  cdouble fm;
  if (hm >= 0.0) {
    fm = std::pow(std::sqrt(0.5 * hm), u);
  } else {
    cdouble iu = (branch < 0) ? cdouble(0.0, -1.0) : cdouble(0.0, 1.0);
    cdouble ipow = 1.0;
    for (int k = 0; k < (u & 3); ++k) ipow *= iu;
    fm = ipow * std::pow(std::sqrt(-0.5 * hm), u);
  }
  const double fp = std::pow(std::sqrt(0.5 * hp), v);
  return xi * std::exp(logZ) * fm * fp * jacobi_poly(s, u, v, cos_theta);
}

}  // namespace detail

double clebsch_gordan(int j1, int m1, int j2, int m2, int j3, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0)
    throw std::invalid_argument("clebsch_gordan: negative angular momentum");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3)
    throw std::invalid_argument("clebsch_gordan: |m| > j");
  if (m3 != m1 + m2) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  using detail::log_factorial;
  const double pref =
      0.5 * (std::log(2.0 * j3 + 1.0) + log_factorial(j3 + j1 - j2) +
             log_factorial(j3 - j1 + j2) + log_factorial(j1 + j2 - j3) -
             log_factorial(j1 + j2 + j3 + 1) + log_factorial(j3 + m3) +
             log_factorial(j3 - m3) + log_factorial(j1 - m1) + log_factorial(j1 + m1) +
             log_factorial(j2 - m2) + log_factorial(j2 + m2));
  const int kmin = std::max({0, -(j3 - j2 + m1), -(j3 - j1 - m2)});
  const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double t = log_factorial(k) + log_factorial(j1 + j2 - j3 - k) +
                     log_factorial(j1 - m1 - k) + log_factorial(j2 + m2 - k) +
                     log_factorial(j3 - j2 + m1 + k) + log_factorial(j3 - j1 - m2 + k);
    const double term = std::exp(pref - t);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

double wigner_d_real(int l, int m, int mp, double beta) {
  if (std::abs(m) > l || std::abs(mp) > l)
    throw std::invalid_argument("wigner_d_real: |m| > l");
  return detail::wigner_d_from_cos(l, m, mp, std::cos(beta)).real();
}

cdouble wigner_d_complex(int l, int m, int mp, const ComplexRotationAngle& angle) {
  if (std::abs(m) > l || std::abs(mp) > l)
    throw std::invalid_argument("wigner_d_complex: |m| > l");
  return detail::wigner_d_from_cos(l, m, mp, angle.cos_val);
}

double modified_spherical_bessel_k(int n, double x) {
  if (x <= 0.0) throw std::domain_error("modified_spherical_bessel_k: x <= 0");
  if (n < 0) throw std::invalid_argument("modified_spherical_bessel_k: n < 0");
  double k0 = std::exp(-x) / x;
  if (n == 0) return k0;
  double k1 = std::exp(-x) * (1.0 / x + 1.0 / (x * x));
  for (int j = 1; j < n; ++j) {
    double k2 = k0 + (2.0 * j + 1.0) / x * k1;
    k0 = k1;
    k1 = k2;
  }
  return k1;
}

void modified_spherical_bessel_k_log(int n_max, double x, std::span<double> out) {
  if (x <= 0.0) throw std::domain_error("modified_spherical_bessel_k_log: x <= 0");
  if (n_max < 0 || out.size() < std::size_t(n_max + 1))
    throw std::invalid_argument("modified_spherical_bessel_k_log: bad span");
  // forward recurrence on rescaled values; scale accumulates in `shift`
  double shift = -x;             // k_0 = e^-x / x = e^shift / x
  double a = 1.0 / x;            // k_0 * e^-shift
  out[0] = shift + std::log(a);
  if (n_max == 0) return;
  double b = 1.0 / x + 1.0 / (x * x);
  out[1] = shift + std::log(b);
  for (int j = 1; j < n_max; ++j) {
    double c = a + (2.0 * j + 1.0) / x * b;
    a = b;
    b = c;
    if (b > 1e250) {
      a *= 1e-250;
      b *= 1e-250;
      shift += 250.0 * std::log(10.0);
    }
    out[j + 1] = shift + std::log(b);
  }
}

double assoc_legendre(int l, int m, double x) {
  if (x < 1.0) throw std::domain_error("assoc_legendre: x < 1");
  if (m < 0 || m > l) throw std::invalid_argument("assoc_legendre: need 0 <= m <= l");
  // P_l^m(cos th) = (-1)^m sqrt((l+m)!/(l-m)!) d^l_{0m}(th); at the complex
  // angle d^l_{0m} = (-i)^m * real, so the product with (-1)^m (+i)^m is real.
  ComplexRotationAngle ang(std::sqrt(std::max(0.0, x * x - 1.0)));
  cdouble d = wigner_d_complex(l, 0, m, ang);
  const double scale =
      std::exp(0.5 * (detail::log_factorial(l + m) - detail::log_factorial(l - m)));
  cdouble ip = 1.0;  // (+i)^m cancels the (-i)^m branch factor in d
  for (int k = 0; k < (m & 3); ++k) ip *= cdouble(0.0, 1.0);
  return (scale * ip * d).real();
}

double normalized_assoc_legendre(int l, int m, double x) {
  if (m < 0 || m > l) throw std::invalid_argument("normalized_assoc_legendre: bad m");
  if (std::abs(x) > 1.0) throw std::domain_error("normalized_assoc_legendre: |x| > 1");
  // stable upward recurrence on fully normalized functions, CS phase included
  const double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double pmm = 1.0 / std::sqrt(4.0 * M_PI);
  for (int k = 1; k <= m; ++k) {
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * somx2;
  }
  if (l == m) return pmm;
  double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(m) * m));
    const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - double(m) * m) /
                               (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    pll = a * (x * pmmp1 - b * pmm);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

cdouble spherical_harmonic(int l, int m, double theta, double phi) {
  if (std::abs(m) > l) throw std::invalid_argument("spherical_harmonic: |m| > l");
  const int am = std::abs(m);
  double p = normalized_assoc_legendre(l, am, std::cos(theta));
  if (m < 0 && (am % 2 != 0)) p = -p;  // Y_{l,-m} = (-1)^m conj(Y_lm)
  return p * std::exp(cdouble(0.0, m * phi));
}

namespace {

// 256-node Gauss-Legendre nodes/weights on [0,1], built once by Newton
// iteration on P_n.
struct Gauss01 {
  std::vector<double> x, w;
  explicit Gauss01(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0.0, p1 = 0.0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = t;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = 0.5 * (1.0 + t);
      w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // includes the 1/2 interval scale [*2/2]
    }
  }
};

const Gauss01& gauss01() {
  static const Gauss01 g(256);
  return g;
}

}  // namespace

double half_range_overlap(int l, int m, int lp, int mp) {
  if (std::abs(m) > l || std::abs(mp) > lp)
    throw std::invalid_argument("half_range_overlap: |m| > l");
  if (m != mp) return 0.0;
  const int am = std::abs(m);
  const auto& g = gauss01();
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    s += g.w[i] * normalized_assoc_legendre(l, am, g.x[i]) *
         normalized_assoc_legendre(lp, am, g.x[i]);
  }
  return 2.0 * M_PI * s;
}

HalfRangeOverlapTable::HalfRangeOverlapTable(int l_max) : l_max_(l_max) {
  blocks_.resize(l_max + 1);
  const auto& g = gauss01();
  for (int m = 0; m <= l_max; ++m) {
    const int n = l_max - m + 1;
    // tabulate normalized legendre values over nodes once per m
    std::vector<double> vals(std::size_t(n) * g.x.size());
    for (int i = 0; i < n; ++i)
      for (std::size_t k = 0; k < g.x.size(); ++k)
        vals[std::size_t(i) * g.x.size() + k] = normalized_assoc_legendre(m + i, m, g.x[k]);
    auto& B = blocks_[m];
    B.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < g.x.size(); ++k)
          s += g.w[k] * vals[std::size_t(i) * g.x.size() + k] *
               vals[std::size_t(j) * g.x.size() + k];
        B[std::size_t(i) * n + j] = B[std::size_t(j) * n + i] = 2.0 * M_PI * s;
      }
    }
  }
}

double HalfRangeOverlapTable::operator()(int l, int m, int lp, int mp) const {
  if (m != mp) return 0.0;
  const int am = std::abs(m);
  if (l < am || lp < am || l > l_max_ || lp > l_max_)
    throw std::invalid_argument("HalfRangeOverlapTable: index out of range");
  const int n = l_max_ - am + 1;
  return blocks_[am][std::size_t(l - am) * n + (lp - am)];
}

}  // namespace rrte
