#pragma once

#include <complex>
#include <vector>

#include "rrte/geometry.hpp"
#include "rrte/greens_infinite.hpp"
#include "rrte/spectral.hpp"

namespace rrte {

struct TransverseWavevector {
  double q = 0.0;     // magnitude, >= 0
  double phi = 0.0;   // azimuth in [0, 2pi)
};

// Q_mu(q) = sqrt(q^2 + 1/lambda^2); +inf for zero modes.
double decay_rate(double lambda, double q);

// Dense plane-wave kernel <lm| kappa(q; z) |l'm'> for l,l' <= l_max.
class KappaMatrix {
 public:
  KappaMatrix(int l_max, double q, double phi_q, double z);
  cdouble at(int l, int m, int lp, int mp) const;
  cdouble& ref(int l, int m, int lp, int mp);
  int l_max() const { return l_max_; }
  double q() const { return q_; }
  double z() const { return z_; }

 private:
  int l_max_, nlm_;
  double q_, phi_q_, z_;
  std::vector<cdouble> v_;
};

KappaMatrix kappa(const SpectralDecomposition& d, const TransverseWavevector& qv,
                  double z, int l_max, int n_modes = -1);

// q = 0 limit: diagonal in m, kernel exp(-|z|/lambda)/lambda.
KappaMatrix kappa_planar_source(const SpectralDecomposition& d, double z, int l_max,
                                int n_modes = -1);

// <l0| kappa(q;z) |l'0> through the x >= 1 associated Legendre functions.
cdouble kappa_normal_incidence(const SpectralDecomposition& d, double q, double z,
                               int l, int lp, int n_modes = -1);

enum class EvanescentSign { Plus, Minus };

// One evanescent mode I^(+-)_{q,M,n}(r, s), truncated at l <= l_max.
cdouble evanescent_mode(const SpectralDecomposition& d, const TransverseWavevector& qv,
                        ModeIndex mu, EvanescentSign sign, const Vec3& r, const Vec3& s,
                        int l_max);

// Dual basis {zeta_mu, zeta~_mu} biorthogonal to {eta_mu, eta~_mu} over the
// truncated (l <= l_max) angular space.  The eta set comes from a truncated
// decomposition; zero modes contribute a single self-paired vector.
class DualBasis {
 public:
  DualBasis(const SpectralDecomposition& trunc, double q);

  int n_lm() const { return nlm_; }
  int n_modes() const { return int(modes_.size()); }          // lambda >= 0 modes
  const std::vector<ModeIndex>& modes() const { return modes_; }
  bool is_zero_mode(int mu) const { return zero_[mu]; }
  double condition() const { return condition_; }

  // column vectors over (l,m), index by l*l+l+m
  const std::vector<cdouble>& eta(int mu) const { return eta_[mu]; }
  const std::vector<cdouble>& eta_tilde(int mu) const;
  const std::vector<cdouble>& zeta(int mu) const { return zeta_[mu]; }
  const std::vector<cdouble>& zeta_tilde(int mu) const;

 private:
  int nlm_ = 0;
  double condition_ = 0.0;
  std::vector<ModeIndex> modes_;
  std::vector<bool> zero_;
  std::vector<std::vector<cdouble>> eta_, eta_tilde_, zeta_, zeta_tilde_;
};

struct PlaneWaveQuadrature {
  double q_max = -1.0;  // < 0: auto (20 / lambda_min, capped by exponent range)
  int n_q = 96;
  int n_phi = -1;       // < 0: auto (4 l_max + 4)
  double rel_tol = 1e-3;  // convergence check between embedded grids
};

// Green's function reconstructed from the evanescent-wave expansion; z != z0.
double greens_from_plane_waves(const SpectralDecomposition& d,
                               const SourceDetectorConfig& config,
                               const PlaneWaveQuadrature& quad = {});

namespace detail {
// d^l_{m,M}(i tau(x)) for all l <= l_max, |m| <= l at fixed M, complex table
// indexed l*l+l+m.
void wigner_d_ct_table(int l_max, int M, double x, std::vector<cdouble>& out);
}  // namespace detail

}  // namespace rrte
