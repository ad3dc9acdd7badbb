#pragma once

#include <complex>
#include <span>
#include <vector>

namespace rrte {

using cdouble = std::complex<double>;

// Degree/order pair for the spherical-harmonic basis |lm>.
struct AngularIndex {
  int l = 0;
  int m = 0;
};

// The complex rotation angle i*tau(x) with cos = sqrt(1+x^2), sin = -i*x.
// The branch is the one produced by the residue evaluation of the plane-wave
// integral: sin(theta/2) = -i * sqrt((cos(theta) - 1)/2).
struct ComplexRotationAngle {
  double x = 0.0;
  double cos_val = 1.0;           // sqrt(1 + x^2) >= 1
  explicit ComplexRotationAngle(double x_) : x(x_), cos_val(std::sqrt(1.0 + x_ * x_)) {}
  cdouble sin_val() const { return {0.0, -x}; }
};

// Clebsch-Gordan coefficient C^{j3 m3}_{j1 m1, j2 m2} (Condon-Shortley /
// Varshalovich).  Zero when m3 != m1+m2 or the triangle rule fails.
double clebsch_gordan(int j1, int m1, int j2, int m2, int j3, int m3);

// Wigner d^l_{m,mp}(beta), beta in radians, Varshalovich convention.
double wigner_d_real(int l, int m, int mp, double beta);

// d^l_{m,mp} at the complex angle i*tau(x).
cdouble wigner_d_complex(int l, int m, int mp, const ComplexRotationAngle& angle);

// Modified spherical Bessel function k_n(x) = -i^n h_n^(1)(ix), k_0 = e^-x/x.
// Strictly positive, grows factorially with n at fixed x.
double modified_spherical_bessel_k(int n, double x);

// log k_n(x) for n = 0..n_max, overflow-free (k_n itself overflows near
// n ~ 60 for x < 1).
void modified_spherical_bessel_k_log(int n_max, double x, std::span<double> out);

// Associated Legendre function of the first kind P_l^m(x) for x >= 1,
// evaluated through the d^l_{0m}(i*tau) identity so that the two kappa
// formulas agree by construction.
double assoc_legendre(int l, int m, double x);

// Standard Y_lm with Condon-Shortley phase, orthonormal on the sphere.
cdouble spherical_harmonic(int l, int m, double theta, double phi);

// <lm|B|l'm'>: overlap of spherical harmonics over the upper hemisphere.
double half_range_overlap(int l, int m, int lp, int mp);

// Normalized associated Legendre P-bar_l^m(x) = sqrt((2l+1)/4pi (l-m)!/(l+m)!)
// * (-1)^m P_l^m(x), |x| <= 1, m >= 0; Y_lm = P-bar e^{im phi}.
double normalized_assoc_legendre(int l, int m, double x);

namespace detail {
// d^l_{m,mp} as a function of complex cos(theta); `branch` selects the sign of
// the imaginary half-angle factor when cos > 1 (-1 = residue branch).
cdouble wigner_d_from_cos(int l, int m, int mp, cdouble cos_theta, int branch = -1);
double log_factorial(int n);
}  // namespace detail

// Dense cached table of half_range_overlap for all l,l' <= l_max (block
// diagonal in m).  Built once, immutable afterwards.
class HalfRangeOverlapTable {
 public:
  explicit HalfRangeOverlapTable(int l_max);
  int l_max() const { return l_max_; }
  double operator()(int l, int m, int lp, int mp) const;

 private:
  int l_max_;
  std::vector<std::vector<double>> blocks_;  // per |m|, row-major (l - m, l' - m)
};

}  // namespace rrte
