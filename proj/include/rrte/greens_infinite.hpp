#pragma once

#include <complex>
#include <vector>

#include "rrte/geometry.hpp"
#include "rrte/spectral.hpp"
#include "rrte/special_functions.hpp"

namespace rrte {

enum class Frame { SourceDetectorAxis, SourceDirection };

struct SourceDetectorConfig {
  Vec3 r0{};                 // source position
  Vec3 s0{0, 0, 1};          // source direction (unit)
  Vec3 r{};                  // detector position
  Vec3 s{0, 0, 1};           // detector direction (unit)
  int l_max = 8;
  bool subtract_ballistic = false;
  Frame frame = Frame::SourceDirection;
  int n_modes = -1;          // per-block mode cap, -1 = all
};

// <lm| chi(R zhat; zhat) |l'm'> in the frame whose z-axis points from source
// to detector; diagonal in m (returns 0 for m != m').
double chi_axis_frame(const SpectralDecomposition& d, double R, int l, int m,
                      int lp, int mp, int n_modes = -1);

// <lm| chi(r; s0) |l' 0> in the frame whose z-axis is the source direction;
// r_rel is the detector offset expressed in that frame.
cdouble chi_source_frame(const SpectralDecomposition& d, const Vec3& r_rel, int l,
                         int m, int lp, int n_modes = -1);

// Ballistic moments delta_{m0} delta_{m'0} sqrt((2l+1)(2l'+1)) e^{-mu_t R}/(4 pi R^2).
double ballistic_subtraction(int l, int m, int lp, int mp, double R, double mu_t);

// Dense chi tables sharing the per-(l,l',M,L) mode sums.
class ChiAxisTable {
 public:
  ChiAxisTable(const SpectralDecomposition& d, double R, int l_max, int n_modes = -1);
  double at(int l, int m, int lp, int mp) const;  // 0 unless m == mp
  int l_max() const { return l_max_; }

 private:
  int l_max_;
  std::vector<double> v_;  // [(l*(l_max+1)+lp)*(2l_max+1) + m+l_max]
};

class ChiSourceTable {
 public:
  ChiSourceTable(const SpectralDecomposition& d, const Vec3& r_rel, int l_max,
                 int n_modes = -1);
  cdouble at(int l, int m, int lp) const;  // m' = 0 column
  void subtract_ballistic(double mu_t);
  int l_max() const { return l_max_; }
  double R() const { return R_; }

 private:
  int l_max_;
  double R_;
  std::vector<cdouble> v_;
};

// Specific intensity (the Green's function evaluated at one configuration),
// real output; throws numeric_error if the imaginary residue of the assembled
// sum exceeds tolerance.
double specific_intensity(const SpectralDecomposition& d,
                          const SourceDetectorConfig& config);

}  // namespace rrte
