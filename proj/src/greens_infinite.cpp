#include "rrte/greens_infinite.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mode_sums.hpp"
#include "rrte/errors.hpp"

namespace rrte {

namespace detail {

const CgTables& cg_tables(int l_max) {
  static std::mutex mu;
  static std::map<int, CgTables> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.lower_bound(l_max);
  if (it != cache.end()) return it->second;
  return cache.emplace(l_max, CgTables(l_max)).first->second;
}

}  // namespace detail

using detail::cg_tables;
using detail::ModeSumTable;

double ballistic_subtraction(int l, int m, int lp, int mp, double R, double mu_t) {
  if (m != 0 || mp != 0) return 0.0;
  return std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) * std::exp(-mu_t * R) /
         (4.0 * M_PI * R * R);
}

namespace {

// common assembly core for one axis-frame element given the mode sums
double axis_element(const detail::CgTables& cg, const ModeSumTable& T,
                    const OpticalMedium& med, int l, int m, int lp, int mp) {
  if (m != mp) return 0.0;
  const int lb = std::min(l, lp);
  if (std::abs(m) > lb) return 0.0;
  const int am = std::abs(m);
  double sum = 0.0;
  for (int j = 0; j <= lb; ++j) {
    const double cm = cg.axis(l, lp, j, am);
    if (cm == 0.0) continue;
    double inner = 0.0;
    for (int Ma = 0; Ma <= lb; ++Ma) {
      const double cM = cg.axis(l, lp, j, Ma);
      if (cM == 0.0) continue;
      const double fold = (Ma == 0 ? 1.0 : 2.0) * ((Ma % 2 == 0) ? 1.0 : -1.0);
      inner += fold * cM * T.at(l, lp, Ma, j);
    }
    sum += cm * inner;
  }
  const double sgn_m = (am % 2 == 0) ? 1.0 : -1.0;  // the (-1)^m of Eq. (A6)
  return sgn_m * sum / (2.0 * M_PI * std::sqrt(med.sigma(l) * med.sigma(lp)));
}

cdouble source_element(const detail::CgTables& cg, const ModeSumTable& T,
                       const OpticalMedium& med, double theta_r, double phi_r,
                       int l, int m, int lp) {
  const int lb = std::min(l, lp);
  cdouble sum = 0.0;
  const int am = std::abs(m);
  for (int j = 0; j <= lb; ++j) {
    const int L = std::abs(l - lp) + 2 * j;
    if (am > L || am > l) continue;
    const double cy = cg.src_y(l, lp, j, am);
    if (cy == 0.0) continue;
    double inner = 0.0;
    for (int Ma = 0; Ma <= lb; ++Ma) {
      const double cM = cg.src_m(l, lp, j, Ma);
      if (cM == 0.0) continue;
      inner += (Ma == 0 ? 1.0 : 2.0) * cM * T.at(l, lp, Ma, j);
    }
    if (inner == 0.0) continue;
    sum += std::conj(spherical_harmonic(L, m, theta_r, phi_r)) * cy * inner;
  }
  const double pref = ((l % 2 == 0) ? 1.0 : -1.0) /
                      std::sqrt(M_PI * (2.0 * lp + 1.0) * med.sigma(l) * med.sigma(lp));
  return pref * sum;
}

}  // namespace

double chi_axis_frame(const SpectralDecomposition& d, double R, int l, int m,
                      int lp, int mp, int n_modes) {
  if (R <= 0.0) throw std::domain_error("chi_axis_frame: R <= 0");
  if (std::abs(m) > l || std::abs(mp) > lp)
    throw std::invalid_argument("chi_axis_frame: bad indices");
  if (m != mp) return 0.0;
  const int lm = std::max(l, lp);
  ModeSumTable T(d, R, lm, n_modes);
  return axis_element(cg_tables(lm), T, d.medium, l, m, lp, mp);
}

cdouble chi_source_frame(const SpectralDecomposition& d, const Vec3& r_rel, int l,
                         int m, int lp, int n_modes) {
  const double R = r_rel.norm();
  if (R <= 0.0) throw std::domain_error("chi_source_frame: zero separation");
  if (std::abs(m) > l) throw std::invalid_argument("chi_source_frame: bad indices");
  const int lm = std::max(l, lp);
  ModeSumTable T(d, R, lm, n_modes);
  return source_element(cg_tables(lm), T, d.medium, polar_theta(r_rel),
                        azimuth_phi(r_rel), l, m, lp);
}

ChiAxisTable::ChiAxisTable(const SpectralDecomposition& d, double R, int l_max,
                           int n_modes)
    : l_max_(l_max) {
  if (R <= 0.0) throw std::domain_error("ChiAxisTable: R <= 0");
  const auto& cg = cg_tables(l_max);
  ModeSumTable T(d, R, l_max, n_modes);
  v_.assign(std::size_t(l_max + 1) * (l_max + 1) * (2 * l_max + 1), 0.0);
  for (int l = 0; l <= l_max; ++l)
    for (int lp = 0; lp <= l_max; ++lp) {
      const int lb = std::min(l, lp);
      for (int m = -lb; m <= lb; ++m) {
        v_[(std::size_t(l) * (l_max + 1) + lp) * (2 * l_max + 1) + (m + l_max)] =
            axis_element(cg, T, d.medium, l, m, lp, m);
      }
    }
}

double ChiAxisTable::at(int l, int m, int lp, int mp) const {
  if (m != mp || std::abs(m) > std::min(l, lp)) return 0.0;
  return v_[(std::size_t(l) * (l_max_ + 1) + lp) * (2 * l_max_ + 1) + (m + l_max_)];
}

ChiSourceTable::ChiSourceTable(const SpectralDecomposition& d, const Vec3& r_rel,
                               int l_max, int n_modes)
    : l_max_(l_max), R_(r_rel.norm()) {
  if (R_ <= 0.0) throw std::domain_error("ChiSourceTable: zero separation");
  const auto& cg = cg_tables(l_max);
  ModeSumTable T(d, R_, l_max, n_modes);
  const double th = polar_theta(r_rel), ph = azimuth_phi(r_rel);
  v_.assign(std::size_t(l_max + 1) * (l_max + 1) * (l_max + 1), 0.0);
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      for (int lp = 0; lp <= l_max; ++lp)
        v_[(std::size_t(l) * l + l + m) * (l_max + 1) + lp] =
            source_element(cg, T, d.medium, th, ph, l, m, lp);
}

cdouble ChiSourceTable::at(int l, int m, int lp) const {
  return v_[(std::size_t(l) * l + l + m) * (l_max_ + 1) + lp];
}

void ChiSourceTable::subtract_ballistic(double mu_t) {
  for (int l = 0; l <= l_max_; ++l)
    for (int lp = 0; lp <= l_max_; ++lp)
      v_[(std::size_t(l) * l + l + 0) * (l_max_ + 1) + lp] -=
          ballistic_subtraction(l, 0, lp, 0, R_, mu_t);
}

double specific_intensity(const SpectralDecomposition& d,
                          const SourceDetectorConfig& config) {
  const Vec3 sep = config.r - config.r0;
  const double R = sep.norm();
  if (R <= 0.0) throw std::domain_error("specific_intensity: r == r0");
  const int L = config.l_max;
  cdouble acc = 0.0;
  double max_term = 0.0;
  if (config.frame == Frame::SourceDetectorAxis) {
    const FrameRotation rot(sep.normalized());
    const Vec3 s = rot.apply(config.s), s0 = rot.apply(config.s0);
    ChiAxisTable chi(d, R, L, config.n_modes);
    const double th = polar_theta(s), ph = azimuth_phi(s);
    const double th0 = polar_theta(s0), ph0 = azimuth_phi(s0);
    for (int l = 0; l <= L; ++l)
      for (int lp = 0; lp <= L; ++lp) {
        const int lb = std::min(l, lp);
        for (int m = -lb; m <= lb; ++m) {
          const double c = chi.at(l, m, lp, m);
          if (c == 0.0) continue;
          const cdouble t = spherical_harmonic(l, m, th, ph) * c *
                            std::conj(spherical_harmonic(lp, m, th0, ph0));
          acc += t;
          max_term = std::max(max_term, std::abs(t));
        }
      }
    // ballistic subtraction is defined on the source-direction moments only
  } else {
    const FrameRotation rot(config.s0);
    const Vec3 s = rot.apply(config.s);
    const Vec3 rr = rot.apply(sep);
    ChiSourceTable chi(d, rr, L, config.n_modes);
    if (config.subtract_ballistic) chi.subtract_ballistic(d.medium.mu_t());
    const double th = polar_theta(s), ph = azimuth_phi(s);
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) {
        const cdouble Y = spherical_harmonic(l, m, th, ph);
        for (int lp = 0; lp <= L; ++lp) {
          const cdouble c = chi.at(l, m, lp);
          if (c == cdouble(0.0)) continue;
          const cdouble t = Y * c * std::sqrt((2.0 * lp + 1.0) / (4.0 * M_PI));
          acc += t;
          max_term = std::max(max_term, std::abs(t));
        }
      }
  }
  const double tol = 1e-9 * std::max(std::abs(acc.real()), 1e-12 * max_term) + 1e-300;
  if (std::abs(acc.imag()) > tol)
    throw numeric_error("specific_intensity: imaginary residue " +
                        std::to_string(acc.imag()) + " exceeds tolerance");
  return acc.real();
}

}  // namespace rrte
