#include "rrte/plane_wave.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rrte/errors.hpp"
#include "rrte/kernels.hpp"
#include "rrte/special_functions.hpp"

namespace rrte {

double decay_rate(double lambda, double q) {
  if (lambda < 0.0) throw std::invalid_argument("decay_rate: lambda < 0");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(q * q + 1.0 / (lambda * lambda));
}

namespace detail {

void wigner_d_ct_table(int l_max, int M, double x, std::vector<cdouble>& out) {
  using rrte::detail::log_factorial;
  out.assign(std::size_t(l_max + 1) * (l_max + 1), 0.0);
  const double c = std::sqrt(1.0 + x * x);
  for (int m = -l_max; m <= l_max; ++m) {
    const int u = std::abs(m - M);
    const int v = std::abs(m + M);
    const int lmin = std::max(std::abs(m), std::abs(M));
    if (lmin > l_max) continue;
    const double xi = (m <= M) ? 1.0 : ((u % 2 == 0) ? 1.0 : -1.0);
    cdouble fm;
    const double hm = 0.5 * (1.0 - c);
    if (hm >= 0.0) {
      fm = std::pow(std::sqrt(hm), u);
    } else {
      cdouble ipw = 1.0;
      for (int k = 0; k < (u & 3); ++k) ipw *= cdouble(0.0, -1.0);
      fm = ipw * std::pow(std::sqrt(-hm), u);
    }
    const double fp = std::pow(std::sqrt(0.5 * (1.0 + c)), v);
    double p0 = 1.0, p1 = 0.0;  // Jacobi recurrence values (real argument c)
    for (int l = lmin; l <= l_max; ++l) {
      const int s = l - (u + v) / 2;
      double ps;
      if (s == 0) {
        ps = 1.0;
        p0 = ps;
      } else if (s == 1) {
        ps = 0.5 * (u - v) + (1.0 + 0.5 * (u + v)) * c;
        p1 = ps;
      } else {
        const int n = s;
        const double a = 2.0 * n * (n + u + v) * (2.0 * n + u + v - 2.0);
        const double b = (2.0 * n + u + v - 1.0) * (double(u) * u - double(v) * v);
        const double cc = (2.0 * n + u + v - 2.0) * (2.0 * n + u + v - 1.0) *
                          (2.0 * n + u + v);
        const double dd = 2.0 * (n + u - 1.0) * (n + v - 1.0) * (2.0 * n + u + v);
        ps = ((b + cc * c) * p1 - dd * p0) / a;
        p0 = p1;
        p1 = ps;
      }
      const double logZ = 0.5 * (log_factorial(s) + log_factorial(s + u + v) -
                                 log_factorial(s + u) - log_factorial(s + v));
      out[std::size_t(l) * l + l + m] = xi * std::exp(logZ) * fm * fp * ps;
    }
  }
}

}  // namespace detail

KappaMatrix::KappaMatrix(int l_max, double q, double phi_q, double z)
    : l_max_(l_max), nlm_((l_max + 1) * (l_max + 1)), q_(q), phi_q_(phi_q), z_(z) {
  v_.assign(std::size_t(nlm_) * nlm_, 0.0);
}

cdouble KappaMatrix::at(int l, int m, int lp, int mp) const {
  return v_[std::size_t(l * l + l + m) * nlm_ + (lp * lp + lp + mp)];
}

cdouble& KappaMatrix::ref(int l, int m, int lp, int mp) {
  return v_[std::size_t(l * l + l + m) * nlm_ + (lp * lp + lp + mp)];
}

KappaMatrix kappa(const SpectralDecomposition& d, const TransverseWavevector& qv,
                  double z, int l_max, int n_modes) {
  if (z == 0.0) throw std::domain_error("kappa: z = 0 is excluded (sgn z undefined)");
  if (l_max > d.l_max) throw std::invalid_argument("kappa: l_max exceeds decomposition");
  KappaMatrix K(l_max, qv.q, qv.phi, z);
  const double sg = z > 0 ? 1.0 : -1.0;
  const int nlm = (l_max + 1) * (l_max + 1);
  std::vector<cdouble> dt;
  std::vector<cdouble> u(nlm);
  std::vector<cdouble> acc(std::size_t(nlm) * nlm, 0.0);
  for (int M = -l_max; M <= l_max; ++M) {
    const BlockSpectrum& b = d.block(M);
    const int nm = n_modes < 0 ? b.n_modes() : std::min(n_modes, b.n_modes());
    for (int n = 0; n < nm; ++n) {
      const double lam = b.lambda[n];
      if (lam <= 0.0) continue;
      const double Q = decay_rate(lam, qv.q);
      const double f = std::exp(-Q * std::abs(z)) / (lam * lam * Q);
      if (f == 0.0) continue;
      detail::wigner_d_ct_table(l_max, M, qv.q * lam, dt);
      for (int l = 0; l <= l_max; ++l) {
        const double comp = b.component(l, n);
        for (int m = -l; m <= l; ++m)
          u[std::size_t(l) * l + l + m] =
              comp == 0.0 ? cdouble(0.0) : dt[std::size_t(l) * l + l + m] * comp;
      }
      for (int i = 0; i < nlm; ++i) {
        if (u[i] == cdouble(0.0)) continue;
        kernels::caxpy(f * u[i], u.data(), acc.data() + std::size_t(i) * nlm, nlm);
      }
    }
  }
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      for (int lp = 0; lp <= l_max; ++lp)
        for (int mp = -lp; mp <= lp; ++mp) {
          const cdouble ph = std::exp(cdouble(0.0, -(m - mp) * qv.phi));
          const double sgl = ((l + lp + m + mp) % 2 == 0) ? 1.0 : sg;
          const double pre = 1.0 / std::sqrt(d.medium.sigma(l) * d.medium.sigma(lp));
          K.ref(l, m, lp, mp) = ph * sgl * pre *
                                acc[std::size_t(l * l + l + m) * nlm + (lp * lp + lp + mp)];
        }
  return K;
}

KappaMatrix kappa_planar_source(const SpectralDecomposition& d, double z, int l_max,
                                int n_modes) {
  if (z == 0.0) throw std::domain_error("kappa_planar_source: z = 0 is excluded");
  if (l_max > d.l_max) throw std::invalid_argument("kappa_planar_source: l_max exceeds decomposition");
  KappaMatrix K(l_max, 0.0, 0.0, z);
  const double sg = z > 0 ? 1.0 : -1.0;
  for (int M = -l_max; M <= l_max; ++M) {
    const BlockSpectrum& b = d.block(M);
    const int nm = n_modes < 0 ? b.n_modes() : std::min(n_modes, b.n_modes());
    for (int l = std::abs(M); l <= l_max; ++l)
      for (int lp = std::abs(M); lp <= l_max; ++lp) {
        double s = 0.0;
        for (int n = 0; n < nm; ++n) {
          const double lam = b.lambda[n];
          if (lam <= 0.0) continue;
          s += b.component(l, n) * b.component(lp, n) * std::exp(-std::abs(z) / lam) / lam;
        }
        const double sgl = ((l + lp) % 2 == 0) ? 1.0 : sg;
        K.ref(l, M, lp, M) += sgl * s / std::sqrt(d.medium.sigma(l) * d.medium.sigma(lp));
      }
  }
  return K;
}

cdouble kappa_normal_incidence(const SpectralDecomposition& d, double q, double z,
                               int l, int lp, int n_modes) {
  if (z == 0.0) throw std::domain_error("kappa_normal_incidence: z = 0 is excluded");
  using rrte::detail::log_factorial;
  const double sg = z > 0 ? 1.0 : -1.0;
  const int lb = std::min(l, lp);
  double sum = 0.0;
  for (int M = 0; M <= lb; ++M) {
    const BlockSpectrum& b = d.block(M);
    const int nm = n_modes < 0 ? b.n_modes() : std::min(n_modes, b.n_modes());
    const double NlM = std::exp(0.5 * (log_factorial(l - M) - log_factorial(l + M)));
    const double NlpM = std::exp(0.5 * (log_factorial(lp - M) - log_factorial(lp + M)));
    double inner = 0.0;
    for (int n = 0; n < nm; ++n) {
      const double lam = b.lambda[n];
      if (lam <= 0.0) continue;
      const double Q = decay_rate(lam, q);
      const double f = std::exp(-Q * std::abs(z)) / (lam * lam * Q);
      if (f == 0.0) continue;
      inner += assoc_legendre(l, M, lam * Q) * b.component(l, n) * f *
               b.component(lp, n) * assoc_legendre(lp, M, lam * Q);
    }
    // sqrt((l-M)!/(l+M)!) P_l^M = i^{|M|} d^l_{0M}(i tau): the real Legendre
    // route therefore carries (-1)^M relative to the d-function products
    const double fold = (M == 0 ? 1.0 : 2.0) * ((M % 2 == 0) ? 1.0 : -1.0);
    sum += fold * NlM * NlpM * inner;
  }
  const double sgl = ((l + lp) % 2 == 0) ? 1.0 : sg;
  return sgl * sum / std::sqrt(d.medium.sigma(l) * d.medium.sigma(lp));
}

namespace {

// Y-sum content of an evanescent mode without the spatial factor.
cdouble evanescent_angular(const SpectralDecomposition& d, double q, double phi_q,
                           ModeIndex mu, EvanescentSign sign, const Vec3& s,
                           int l_max, std::vector<cdouble>& dt) {
  const BlockSpectrum& b = d.block(mu.M);
  const double lam = b.lambda[mu.n];
  const int Muse = sign == EvanescentSign::Plus ? mu.M : -mu.M;
  detail::wigner_d_ct_table(l_max, Muse, q * lam, dt);
  const double th = polar_theta(s), phs = azimuth_phi(s);
  cdouble sum = 0.0;
  for (int l = std::abs(mu.M); l <= l_max; ++l) {
    const double comp = b.component(l, mu.n);
    if (comp == 0.0) continue;
    const double pre = comp / std::sqrt(d.medium.sigma(l));
    for (int m = -l; m <= l; ++m) {
      cdouble dval = dt[std::size_t(l) * l + l + m];
      if (dval == cdouble(0.0)) continue;
      if (sign == EvanescentSign::Minus && ((l + m) % 2 != 0)) dval = -dval;
      sum += spherical_harmonic(l, m, th, phs) * std::exp(cdouble(0.0, -m * phi_q)) *
             pre * dval;
    }
  }
  if (sign == EvanescentSign::Minus && (std::abs(mu.M) % 2 != 0)) sum = -sum;
  return sum;
}

}  // namespace

cdouble evanescent_mode(const SpectralDecomposition& d, const TransverseWavevector& qv,
                        ModeIndex mu, EvanescentSign sign, const Vec3& r, const Vec3& s,
                        int l_max) {
  const BlockSpectrum& b = d.block(mu.M);
  if (mu.n < 0 || mu.n >= b.n_modes())
    throw std::invalid_argument("evanescent_mode: bad mode index");
  const double lam = b.lambda[mu.n];
  const double Q = decay_rate(lam, qv.q);
  const double zfac = sign == EvanescentSign::Plus ? -r.z : r.z;
  double e;
  if (std::isinf(Q)) {
    if (zfac > 0.0) throw std::domain_error("evanescent_mode: zero mode grows here");
    e = (zfac == 0.0) ? 1.0 : 0.0;
  } else {
    e = std::exp(Q * zfac);
  }
  if (e == 0.0) return 0.0;
  const double qx = qv.q * std::cos(qv.phi), qy = qv.q * std::sin(qv.phi);
  const cdouble ph = std::exp(cdouble(0.0, qx * r.x + qy * r.y)) * e;
  std::vector<cdouble> dt;
  return ph * evanescent_angular(d, qv.q, qv.phi, mu, sign, s, l_max, dt);
}

DualBasis::DualBasis(const SpectralDecomposition& trunc, double q) {
  const int l_max = trunc.l_max;
  nlm_ = (l_max + 1) * (l_max + 1);
  for (int M = -l_max; M <= l_max; ++M) {
    const BlockSpectrum& b = trunc.block(M);
    for (int n = 0; n < b.n_modes(); ++n) {
      modes_.push_back({M, n});
      zero_.push_back(b.lambda[n] == 0.0);
    }
  }
  const int T = int(modes_.size());
  int n_pos = 0;
  for (int i = 0; i < T; ++i)
    if (!zero_[i]) ++n_pos;
  const int total = T + n_pos;
  if (total != nlm_)
    throw numeric_error("dual_basis: eta family does not square the space");
  eta_.resize(T);
  eta_tilde_.resize(T);
  std::vector<cdouble> dt;
  Eigen::MatrixXcd H(nlm_, total);
  int col = 0;
  for (int i = 0; i < T; ++i) {
    const ModeIndex mu = modes_[i];
    const BlockSpectrum& b = trunc.block(mu.M);
    const double lam = b.lambda[mu.n];
    detail::wigner_d_ct_table(l_max, mu.M, q * lam, dt);
    auto& e = eta_[i];
    e.assign(nlm_, 0.0);
    for (int l = std::abs(mu.M); l <= l_max; ++l) {
      const double comp = b.component(l, mu.n);
      if (comp == 0.0) continue;
      for (int m = -l; m <= l; ++m)
        e[std::size_t(l) * l + l + m] = dt[std::size_t(l) * l + l + m] * comp;
    }
    for (int k = 0; k < nlm_; ++k) H(k, col) = e[k];
    ++col;
    if (!zero_[i]) {
      auto& et = eta_tilde_[i];
      et.assign(nlm_, 0.0);
      for (int l = 0; l <= l_max; ++l) {
        const double pl = (l % 2 == 0) ? 1.0 : -1.0;
        for (int m = -l; m <= l; ++m)
          et[std::size_t(l) * l + l + m] = pl * e[std::size_t(l) * l + l + m];
      }
    }
  }
  for (int i = 0; i < T; ++i) {
    if (zero_[i]) continue;
    for (int k = 0; k < nlm_; ++k) H(k, col) = eta_tilde_[i][k];
    ++col;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
  condition_ = svd.singularValues()(0) / svd.singularValues()(total - 1);
  if (!(condition_ < 1e12))
    throw conditioning_error("dual_basis: eta family ill-conditioned", condition_);
  Eigen::MatrixXcd Hinv = H.partialPivLu().solve(Eigen::MatrixXcd::Identity(total, total));
  Eigen::MatrixXcd Z = Hinv.adjoint();
  zeta_.resize(T);
  zeta_tilde_.resize(T);
  col = 0;
  for (int i = 0; i < T; ++i) {
    zeta_[i].assign(nlm_, 0.0);
    for (int k = 0; k < nlm_; ++k) zeta_[i][k] = Z(k, col);
    ++col;
  }
  for (int i = 0; i < T; ++i) {
    if (zero_[i]) continue;
    zeta_tilde_[i].assign(nlm_, 0.0);
    for (int k = 0; k < nlm_; ++k) zeta_tilde_[i][k] = Z(k, col);
    ++col;
  }
}

const std::vector<cdouble>& DualBasis::eta_tilde(int mu) const {
  if (zero_[mu])
    throw std::invalid_argument("DualBasis: zero mode has no independent eta~");
  return eta_tilde_[mu];
}

const std::vector<cdouble>& DualBasis::zeta_tilde(int mu) const {
  if (zero_[mu])
    throw std::invalid_argument("DualBasis: zero mode has no independent zeta~");
  return zeta_tilde_[mu];
}

namespace {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes/weights on [0, L]
  GaussLegendre(int n, double L) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0;
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
      x[i] = 0.5 * L * (1.0 + t);
      w[i] = L / ((1.0 - t * t) * dp * dp);
    }
  }
};

}  // namespace

double greens_from_plane_waves(const SpectralDecomposition& d,
                               const SourceDetectorConfig& config,
                               const PlaneWaveQuadrature& quad) {
  const double dz = config.r.z - config.r0.z;
  if (dz == 0.0)
    throw std::domain_error("greens_from_plane_waves: z == z0 is excluded");
  const int l_max = config.l_max;
  double lam_min = std::numeric_limits<double>::infinity();
  for (int M = 0; M <= l_max; ++M) {
    const BlockSpectrum& b = d.block(M);
    for (double l : b.lambda)
      if (l > 0.0) lam_min = std::min(lam_min, l);
  }
  double q_max = quad.q_max;
  if (q_max <= 0.0) q_max = std::min(20.0 / lam_min, 750.0 / std::abs(dz));
  const int n_phi = quad.n_phi > 0 ? quad.n_phi : 4 * l_max + 4;
  const double rho_x = config.r.x - config.r0.x;
  const double rho_y = config.r.y - config.r0.y;

  std::vector<cdouble> dt;
  auto integrate = [&](int n_q) {
    GaussLegendre gl(n_q, q_max);
    cdouble total = 0.0;
    for (int i = 0; i < n_q; ++i) {
      const double q = gl.x[i];
      cdouble acc = 0.0;
      for (int ip = 0; ip < n_phi; ++ip) {
        const double phq = 2.0 * M_PI * ip / n_phi;
        const cdouble rho_phase =
            std::exp(cdouble(0.0, q * (std::cos(phq) * rho_x + std::sin(phq) * rho_y)));
        cdouble s = 0.0;
        for (int M = -l_max; M <= l_max; ++M) {
          const BlockSpectrum& b = d.block(M);
          const int nm = config.n_modes < 0 ? b.n_modes()
                                            : std::min(config.n_modes, b.n_modes());
          for (int n = 0; n < nm; ++n) {
            const double lam = b.lambda[n];
            if (lam <= 0.0) continue;
            const double Q = decay_rate(lam, q);
            if (Q * std::abs(dz) > 700.0) continue;
            const double V = 1.0 / (lam * lam * Q);
            const ModeIndex mu{M, n};
            cdouble a_det, a_src;
            if (dz > 0) {
              a_det = evanescent_angular(d, q, phq, mu, EvanescentSign::Plus,
                                         config.s, l_max, dt);
              a_src = evanescent_angular(d, q, phq + M_PI, mu, EvanescentSign::Minus,
                                         -config.s0, l_max, dt);
            } else {
              a_det = evanescent_angular(d, q, phq, mu, EvanescentSign::Minus,
                                         config.s, l_max, dt);
              a_src = evanescent_angular(d, q, phq + M_PI, mu, EvanescentSign::Plus,
                                         -config.s0, l_max, dt);
            }
            s += V * std::exp(-Q * std::abs(dz)) * a_det * a_src;
          }
        }
        acc += rho_phase * s;
      }
      total += gl.w[i] * q * acc * (2.0 * M_PI / n_phi);
    }
    return total / (4.0 * M_PI * M_PI);
  };

  const cdouble fine = integrate(quad.n_q);
  const cdouble coarse = integrate(std::max(8, (2 * quad.n_q) / 3));
  const double est = std::abs(fine - coarse);
  if (est > quad.rel_tol * std::max(std::abs(fine), 1e-300))
    throw numeric_error("greens_from_plane_waves: quadrature error estimate " +
                        std::to_string(est) + " exceeds tolerance");
  return fine.real();
}

}  // namespace rrte
