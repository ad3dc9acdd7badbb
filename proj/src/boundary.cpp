#include "rrte/boundary.hpp"

#include <cmath>

#include "rrte/errors.hpp"
#include "rrte/greens_infinite.hpp"
#include "rrte/kernels.hpp"
#include "rrte/parallel.hpp"

namespace rrte {

namespace parallel {
namespace {
std::atomic<int> g_threads{1};
}
void set_threads(int n) { g_threads.store(std::max(1, n)); }
int threads() { return g_threads.load(); }
}  // namespace parallel

namespace {

int lm_index(int l, int m) { return l * l + l + m; }

Eigen::VectorXcd harmonics_vector(int l_max, const Vec3& dir) {
  Eigen::VectorXcd v(( l_max + 1) * (l_max + 1));
  const double th = polar_theta(dir), ph = azimuth_phi(dir);
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      v(lm_index(l, m)) = spherical_harmonic(l, m, th, ph);
  return v;
}

}  // namespace

EvanescentBasis::EvanescentBasis(const OpticalMedium& medium, int l_max)
    : l_max_(l_max),
      nlm_((l_max + 1) * (l_max + 1)),
      trunc_(truncated_decomposition(medium, l_max)),
      overlap_(l_max) {
  if (l_max < 1 || l_max % 2 == 0)
    throw std::invalid_argument("EvanescentBasis: l_max must be odd (mode counting)");
  for (int M = -l_max; M <= l_max; ++M) {
    const BlockSpectrum& b = trunc_.block(M);
    for (int n = 0; n < b.n_modes(); ++n) modes_.push_back({M, n});
  }
  if (int(modes_.size()) != (l_max + 1) * (l_max + 2) / 2)
    throw numeric_error("EvanescentBasis: unexpected mode count");
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      if ((l - m) % 2 == 0) parity_rows_.push_back(lm_index(l, m));

  // dominant eigenvectors of B: eigenvalues pair as (alpha, 1-alpha) within
  // each m block, so alpha >= 1/2 selects exactly one of each pair plus the
  // self-paired exact halves
  std::vector<Eigen::VectorXd> rows;
  for (int m = -l_max; m <= l_max; ++m) {
    const int nb = l_max - std::abs(m) + 1;
    Eigen::MatrixXd Bm(nb, nb);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        Bm(i, j) = overlap_(std::abs(m) + i, m, std::abs(m) + j, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Bm);
    for (int k = nb - 1; k >= 0; --k) {
      if (es.eigenvalues()(k) < 0.5 - 1e-12) continue;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(nlm_);
      for (int i = 0; i < nb; ++i)
        row(lm_index(std::abs(m) + i, m)) = es.eigenvectors()(i, k);
      rows.push_back(std::move(row));
    }
  }
  xi_rows_.resize(int(rows.size()), nlm_);
  for (int r = 0; r < int(rows.size()); ++r) xi_rows_.row(r) = rows[r].transpose();
  if (int(rows.size()) != n_modes())
    throw numeric_error("EvanescentBasis: dominant-eigenvector count mismatch");
}

double EvanescentBasis::lambda(int mu) const {
  const ModeIndex m = modes_[mu];
  return trunc_.block(m.M).lambda[m.n];
}

double EvanescentBasis::decay(int mu, double q) const {
  return decay_rate(lambda(mu), q);
}

Eigen::VectorXcd EvanescentBasis::cplus(int mu, double q) const {
  const ModeIndex mo = modes_[mu];
  const BlockSpectrum& b = trunc_.block(mo.M);
  std::vector<cdouble> dt;
  rrte::detail::wigner_d_ct_table(l_max_, mo.M, q * b.lambda[mo.n], dt);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nlm_);
  const OpticalMedium& med = trunc_.medium;
  for (int l = std::abs(mo.M); l <= l_max_; ++l) {
    const double comp = b.component(l, mo.n);
    if (comp == 0.0) continue;
    const double pre = comp / std::sqrt(med.sigma(l));
    for (int m = -l; m <= l; ++m) v(lm_index(l, m)) = pre * dt[lm_index(l, m)];
  }
  return v;
}

Eigen::VectorXcd EvanescentBasis::cminus(int mu, double q) const {
  const ModeIndex mo = modes_[mu];
  const BlockSpectrum& b = trunc_.block(mo.M);
  std::vector<cdouble> dt;
  rrte::detail::wigner_d_ct_table(l_max_, mo.M, q * b.lambda[mo.n], dt);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nlm_);
  const OpticalMedium& med = trunc_.medium;
  for (int l = std::abs(mo.M); l <= l_max_; ++l) {
    const double comp = b.component(l, mo.n);
    if (comp == 0.0) continue;
    const double pl = (l % 2 == 0) ? 1.0 : -1.0;
    const double pre = pl * comp / std::sqrt(med.sigma(l));
    for (int m = -l; m <= l; ++m) v(lm_index(l, m)) = pre * dt[lm_index(l, -m)];
  }
  return v;
}

Eigen::VectorXcd EvanescentBasis::apply_overlap(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(nlm_);
  for (int m = -l_max_; m <= l_max_; ++m)
    for (int l = std::abs(m); l <= l_max_; ++l) {
      cdouble s = 0.0;
      for (int lp = std::abs(m); lp <= l_max_; ++lp)
        s += overlap_(l, m, lp, m) * x(lm_index(lp, m));
      y(lm_index(l, m)) = s;
    }
  return y;
}

HalfspaceSystem assemble_halfspace_system(const EvanescentBasis& basis, double q,
                                          const Vec3& s0) {
  if (s0.z <= 0.0)
    throw std::invalid_argument("assemble_halfspace_system: need s0.z > 0");
  const int T = basis.n_modes();
  HalfspaceSystem sys;
  sys.G.resize(basis.n_lm(), T);
  for (int mu = 0; mu < T; ++mu) sys.G.col(mu) = basis.apply_overlap(basis.cplus(mu, q));
  sys.rhs = harmonics_vector(basis.l_max(), s0).conjugate();
  return sys;
}

namespace {

Eigen::VectorXcd solve_projected(const EvanescentBasis& basis,
                                 const HalfspaceSystem& sys, HalfSpaceMethod method,
                                 double q) {
  if (method == HalfSpaceMethod::ParityFilter) {
    const auto& rows = basis.parity_rows();
    const int T = int(rows.size());
    Eigen::MatrixXcd A(T, T);
    Eigen::VectorXcd b(T);
    for (int r = 0; r < T; ++r) {
      A.row(r) = sys.G.row(rows[r]);
      b(r) = sys.rhs(rows[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible())
      throw numeric_error("solve_halfspace: singular parity-filtered system at q=" +
                          std::to_string(q));
    return lu.solve(b);
  }
  const Eigen::MatrixXd& P = basis.dominant_overlap_rows();
  Eigen::MatrixXcd A = P.cast<cdouble>() * sys.G;
  Eigen::VectorXcd b = P.cast<cdouble>() * sys.rhs;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  if (!lu.isInvertible())
    throw numeric_error("solve_halfspace: singular projected system at q=" +
                        std::to_string(q));
  return lu.solve(b);
}

}  // namespace

BoundaryCoefficients solve_halfspace_external(const EvanescentBasis& basis, double q,
                                              const Vec3& s0, HalfSpaceMethod method) {
  HalfspaceSystem sys = assemble_halfspace_system(basis, q, s0);
  BoundaryCoefficients out;
  out.q = q;
  out.f_plus = solve_projected(basis, sys, method, q);
  return out;
}

BoundaryCoefficients solve_slab_external(const EvanescentBasis& basis, double q,
                                         const Vec3& s0, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("solve_slab_external: need L > 0");
  if (s0.z <= 0.0) throw std::invalid_argument("solve_slab_external: need s0.z > 0");
  const int T = basis.n_modes();
  const int nlm = basis.n_lm();
  // F- columns are scaled so their mode varies as e^{+Q(z-L)}
  Eigen::MatrixXcd Gp(nlm, T), Gm(nlm, T), Hp(nlm, T), Hm(nlm, T);
  for (int mu = 0; mu < T; ++mu) {
    const Eigen::VectorXcd cp = basis.cplus(mu, q);
    const Eigen::VectorXcd cm = basis.cminus(mu, q);
    const double Q = basis.decay(mu, q);
    const double e = (std::isinf(Q) || Q * L > 700.0) ? 0.0 : std::exp(-Q * L);
    const Eigen::VectorXcd Bcp = basis.apply_overlap(cp);
    const Eigen::VectorXcd Bcm = basis.apply_overlap(cm);
    Gp.col(mu) = Bcp;
    Gm.col(mu) = e * Bcm;
    // lower-hemisphere overlap: (I - B) x
    Hp.col(mu) = e * (cp - Bcp);
    Hm.col(mu) = cm - Bcm;
  }
  Eigen::VectorXcd bvec = harmonics_vector(basis.l_max(), s0).conjugate();
  const auto& rows = basis.parity_rows();
  const int R = int(rows.size());
  Eigen::MatrixXcd A(2 * R, 2 * T);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * R);
  for (int r = 0; r < R; ++r) {
    A.row(r).head(T) = Gp.row(rows[r]);
    A.row(r).tail(T) = Gm.row(rows[r]);
    A.row(R + r).head(T) = Hp.row(rows[r]);
    A.row(R + r).tail(T) = Hm.row(rows[r]);
    b(r) = bvec(rows[r]);
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::VectorXcd sol = lu.solve(b);
  if (!sol.allFinite())
    throw numeric_error("solve_slab_external: singular system at q=" + std::to_string(q));
  BoundaryCoefficients out;
  out.q = q;
  out.f_plus = sol.head(T);
  out.f_minus = sol.tail(T);
  return out;
}

namespace {

// I+ content sums for the bulk modes: A_{mu m} = sum_l Y_lm(-s0) d^l_{mM} phi_l / sqrt(sig_l)
struct BulkSourceTerms {
  std::vector<double> V;            // 1/(lam^2 Q)
  std::vector<double> expz0;        // e^{-Q z0}
  std::vector<Eigen::VectorXcd> Am;  // size 2 l_max + 1, index m + l_max
  std::vector<Eigen::VectorXcd> Bcm; // B cminus per bulk mode
};

BulkSourceTerms bulk_source_terms(const EvanescentBasis& basis,
                                  const SpectralDecomposition& bulk, double q,
                                  const Vec3& r0, const Vec3& s0) {
  const int l_max = basis.l_max();
  BulkSourceTerms out;
  const Eigen::VectorXcd Ysrc = harmonics_vector(l_max, -s0);
  std::vector<cdouble> dt;
  const OpticalMedium& med = bulk.medium;
  for (int M = -l_max; M <= l_max; ++M) {
    const BlockSpectrum& b = bulk.block(M);
    for (int n = 0; n < b.n_modes(); ++n) {
      const double lam = b.lambda[n];
      if (lam <= 0.0) continue;
      const double Q = decay_rate(lam, q);
      const double ez = (Q * r0.z > 700.0) ? 0.0 : std::exp(-Q * r0.z);
      if (ez == 0.0) continue;
      rrte::detail::wigner_d_ct_table(l_max, M, q * lam, dt);
      Eigen::VectorXcd Am = Eigen::VectorXcd::Zero(2 * l_max + 1);
      Eigen::VectorXcd cm = Eigen::VectorXcd::Zero(basis.n_lm());
      for (int l = std::abs(M); l <= l_max; ++l) {
        const double comp = b.component(l, n);
        if (comp == 0.0) continue;
        const double is = 1.0 / std::sqrt(med.sigma(l));
        const double pl = (l % 2 == 0) ? 1.0 : -1.0;
        for (int m = -l; m <= l; ++m) {
          Am(m + l_max) += Ysrc(lm_index(l, m)) * dt[lm_index(l, m)] * comp * is;
          cm(lm_index(l, m)) += pl * dt[lm_index(l, -m)] * comp * is;
        }
      }
      out.V.push_back(1.0 / (lam * lam * Q));
      out.expz0.push_back(ez);
      out.Am.push_back(std::move(Am));
      out.Bcm.push_back(basis.apply_overlap(cm));
    }
  }
  return out;
}

Eigen::VectorXcd internal_rhs(const EvanescentBasis& basis, const BulkSourceTerms& t,
                              double phi_q) {
  const int l_max = basis.l_max();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(basis.n_lm());
  for (std::size_t k = 0; k < t.V.size(); ++k) {
    // I+_{-q,mu}(r0,-s0) without the transverse phase: e^{-Q z0} sum_m A_m e^{-i m (phi_q+pi)}
    cdouble a = 0.0;
    for (int m = -l_max; m <= l_max; ++m)
      a += t.Am[k](m + l_max) * std::exp(cdouble(0.0, -m * (phi_q + M_PI)));
    rhs -= t.V[k] * t.expz0[k] * a * t.Bcm[k];
  }
  return rhs;
}

}  // namespace

BoundaryCoefficients solve_halfspace_internal(const EvanescentBasis& basis,
                                              const SpectralDecomposition& bulk,
                                              double q, const Vec3& r0, const Vec3& s0) {
  if (r0.z <= 0.0) throw std::invalid_argument("solve_halfspace_internal: need z0 > 0");
  const int T = basis.n_modes();
  HalfspaceSystem sys;
  sys.G.resize(basis.n_lm(), T);
  for (int mu = 0; mu < T; ++mu) sys.G.col(mu) = basis.apply_overlap(basis.cplus(mu, q));
  BulkSourceTerms t = bulk_source_terms(basis, bulk, q, r0, s0);
  sys.rhs = internal_rhs(basis, t, 0.0);
  BoundaryCoefficients out;
  out.q = q;
  out.f_plus = solve_projected(basis, sys, HalfSpaceMethod::ParityFilter, q);
  return out;
}

BoundarySolution::BoundarySolution(std::shared_ptr<const EvanescentBasis> basis,
                                   std::shared_ptr<const SpectralDecomposition> bulk,
                                   BoundaryProblem problem, BoundaryQuadrature quad,
                                   HalfSpaceMethod method)
    : basis_(std::move(basis)), bulk_(std::move(bulk)), problem_(problem), quad_(quad) {
  const EvanescentBasis& eb = *basis_;
  const int l_max = eb.l_max();
  const int T = eb.n_modes();
  const int nlm = eb.n_lm();
  if (problem_.kind != BoundaryKind::HalfSpaceInternal && problem_.s0.z <= 0.0)
    throw std::invalid_argument("BoundarySolution: external beam needs s0.z > 0");
  if (problem_.kind == BoundaryKind::HalfSpaceInternal) {
    if (!bulk_)
      throw std::invalid_argument("BoundarySolution: internal problem needs bulk modes");
    if (problem_.r0.z <= 0.0)
      throw std::invalid_argument("BoundarySolution: internal source needs z0 > 0");
  }
  if (problem_.kind == BoundaryKind::SlabExternal && !(problem_.L > 0.0))
    throw std::invalid_argument("BoundarySolution: slab needs L > 0");

  double lam_min = std::numeric_limits<double>::infinity();
  for (int M = 0; M <= l_max; ++M)
    for (double l : eb.decomposition().block(M).lambda)
      if (l > 0.0) lam_min = std::min(lam_min, l);
  const double lstar = eb.decomposition().medium.transport_mfp();
  double q_max = quad_.q_max > 0 ? quad_.q_max : std::min(20.0 / lam_min, 30.0 / lstar);
  n_phi_ = quad_.n_phi > 0 ? quad_.n_phi : 4 * l_max + 4;

  const int n_q = quad_.n_q;
  q_nodes_.resize(n_q);
  q_weights_.resize(n_q);
  for (int i = 0; i < n_q; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n_q + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int j = 2; j <= n_q; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n_q * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double dp = n_q * (t * p1 - p0) / (t * t - 1.0);
    q_nodes_[i] = 0.5 * q_max * (1.0 + t);
    q_weights_[i] = q_max / ((1.0 - t * t) * dp * dp);
  }

  coeffs_.resize(std::size_t(n_q) * n_phi_);
  cplus0_.assign(std::size_t(n_q) * T, Eigen::VectorXcd());
  cminus0_.assign(problem_.kind == BoundaryKind::SlabExternal ? std::size_t(n_q) * T : 0,
                  Eigen::VectorXcd());
  std::vector<double> enf(n_q, 0.0), full(n_q, 0.0);

  parallel::parallel_for(n_q, [&](int iq) {
    const double q = q_nodes_[iq];
    Eigen::MatrixXcd G(nlm, T);
    for (int mu = 0; mu < T; ++mu) {
      Eigen::VectorXcd cp = eb.cplus(mu, q);
      G.col(mu) = eb.apply_overlap(cp);
      cplus0_[std::size_t(iq) * T + mu] = std::move(cp);
    }
    const auto& rows = eb.parity_rows();
    const int R = int(rows.size());
    const Eigen::MatrixXd& P = eb.dominant_overlap_rows();

    if (problem_.kind == BoundaryKind::SlabExternal) {
      Eigen::MatrixXcd A(2 * R, 2 * T);
      std::vector<double> eQL(T);
      for (int mu = 0; mu < T; ++mu) {
        const double Q = eb.decay(mu, q);
        eQL[mu] = (std::isinf(Q) || Q * problem_.L > 700.0)
                      ? 0.0
                      : std::exp(-Q * problem_.L);
        Eigen::VectorXcd cm = eb.cminus(mu, q);
        const Eigen::VectorXcd Bcm = eb.apply_overlap(cm);
        const Eigen::VectorXcd& cp = cplus0_[std::size_t(iq) * T + mu];
        const Eigen::VectorXcd Bcp = G.col(mu);
        for (int r = 0; r < R; ++r) {
          A(r, mu) = Bcp(rows[r]);
          A(r, T + mu) = eQL[mu] * Bcm(rows[r]);
          A(R + r, mu) = eQL[mu] * (cp(rows[r]) - Bcp(rows[r]));
          A(R + r, T + mu) = cm(rows[r]) - Bcm(rows[r]);
        }
        cminus0_[std::size_t(iq) * T + mu] = std::move(cm);
      }
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
      const Eigen::VectorXcd Y0c = harmonics_vector(l_max, problem_.s0).conjugate();
      for (int ip = 0; ip < n_phi_; ++ip) {
        const double phq = 2.0 * M_PI * ip / n_phi_;
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * R);
        for (int r = 0; r < R; ++r) {
          const int lmr = rows[r];
          int l = int(std::lround(std::floor(std::sqrt(double(lmr) + 0.5))));
          while (l * l > lmr) --l;
          while ((l + 1) * (l + 1) <= lmr) ++l;
          const int m = lmr - l * l - l;
          b(r) = Y0c(lmr) * std::exp(cdouble(0.0, m * phq));
        }
        Eigen::VectorXcd sol = lu.solve(b);
        if (!sol.allFinite())
          throw numeric_error("BoundarySolution: slab solve failed at q=" +
                              std::to_string(q));
        BoundaryCoefficients c;
        c.q = q;
        c.f_plus = sol.head(T);
        c.f_minus = sol.tail(T);
        Eigen::VectorXcd res = A * sol - b;
        const double rb = b.norm() + 1e-300;
        enf[iq] = std::max(enf[iq], res.lpNorm<Eigen::Infinity>() / rb);
        full[iq] = std::max(full[iq], res.norm() / rb);
        coeffs_[std::size_t(iq) * n_phi_ + ip] = std::move(c);
      }
      return;
    }

    // half-space problems: factor the projected phi_q = 0 matrix once
    Eigen::MatrixXcd A;
    if (method == HalfSpaceMethod::ParityFilter) {
      A.resize(R, T);
      for (int r = 0; r < R; ++r) A.row(r) = G.row(rows[r]);
    } else {
      A = P.cast<cdouble>() * G;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);

    BulkSourceTerms bt;
    Eigen::VectorXcd Y0c;
    if (problem_.kind == BoundaryKind::HalfSpaceInternal)
      bt = bulk_source_terms(eb, *bulk_, q, problem_.r0, problem_.s0);
    else
      Y0c = harmonics_vector(l_max, problem_.s0).conjugate();

    for (int ip = 0; ip < n_phi_; ++ip) {
      const double phq = 2.0 * M_PI * ip / n_phi_;
      Eigen::VectorXcd bfull(nlm);
      if (problem_.kind == BoundaryKind::HalfSpaceInternal) {
        bfull = internal_rhs(eb, bt, phq);
      } else {
        for (int l = 0; l <= l_max; ++l)
          for (int m = -l; m <= l; ++m)
            bfull(lm_index(l, m)) = Y0c(lm_index(l, m)) * std::exp(cdouble(0.0, m * phq));
      }
      Eigen::VectorXcd b;
      if (method == HalfSpaceMethod::ParityFilter) {
        b.resize(R);
        for (int r = 0; r < R; ++r) b(r) = bfull(rows[r]);
      } else {
        b = P.cast<cdouble>() * bfull;
      }
      BoundaryCoefficients c;
      c.q = q;
      c.f_plus = lu.solve(b);
      if (!c.f_plus.allFinite())
        throw numeric_error("BoundarySolution: solve failed at q=" + std::to_string(q));
      Eigen::VectorXcd res = G * c.f_plus - bfull;
      const double rb = bfull.norm() + 1e-300;
      double e = 0.0;
      for (int r : rows) e = std::max(e, std::abs(res(r)));
      enf[iq] = std::max(enf[iq], e / rb);
      full[iq] = std::max(full[iq], res.norm() / rb);
      coeffs_[std::size_t(iq) * n_phi_ + ip] = std::move(c);
    }
  });
  for (int iq = 0; iq < n_q; ++iq) {
    enforced_residual_ = std::max(enforced_residual_, enf[iq]);
    full_residual_ = std::max(full_residual_, full[iq]);
  }
}

double BoundarySolution::intensity(const Vec3& r, const Vec3& s) const {
  const EvanescentBasis& eb = *basis_;
  const int l_max = eb.l_max();
  const int T = eb.n_modes();
  const int nlm = eb.n_lm();
  if (r.z <= 0.0) throw std::domain_error("BoundarySolution: point outside medium");
  if (problem_.kind == BoundaryKind::SlabExternal && r.z >= problem_.L)
    throw std::domain_error("BoundarySolution: point outside slab");
  const Eigen::VectorXcd Ys = harmonics_vector(l_max, s);
  const double rx = r.x - problem_.rho0.x;
  const double ry = r.y - problem_.rho0.y;
  // Y twisted by e^{-i m phi_q}, per phi node
  Eigen::VectorXcd Yt(nlm);
  cdouble acc = 0.0;
  for (std::size_t iq = 0; iq < q_nodes_.size(); ++iq) {
    const double q = q_nodes_[iq];
    cdouble phi_acc = 0.0;
    for (int ip = 0; ip < n_phi_; ++ip) {
      const double phq = 2.0 * M_PI * ip / n_phi_;
      const BoundaryCoefficients& c = coeffs_[iq * n_phi_ + ip];
      for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m)
          Yt(lm_index(l, m)) = Ys(lm_index(l, m)) * std::exp(cdouble(0.0, -m * phq));
      cdouble val = 0.0;
      for (int mu = 0; mu < T; ++mu) {
        const double Q = eb.decay(mu, q);
        if (std::isinf(Q)) continue;  // zero modes vanish for z > 0
        const double ep = (Q * r.z > 700.0) ? 0.0 : std::exp(-Q * r.z);
        if (ep != 0.0 && c.f_plus(mu) != cdouble(0.0)) {
          const Eigen::VectorXcd& cp = cplus0_[iq * T + mu];
          val += c.f_plus(mu) * ep *
                 kernels::cdot(Yt.data(), cp.data(), std::size_t(nlm));
        }
        if (problem_.kind == BoundaryKind::SlabExternal) {
          const double em = (Q * (problem_.L - r.z) > 700.0)
                                ? 0.0
                                : std::exp(-Q * (problem_.L - r.z));
          if (em != 0.0 && c.f_minus(mu) != cdouble(0.0)) {
            const Eigen::VectorXcd& cm = cminus0_[iq * T + mu];
            val += c.f_minus(mu) * em *
                   kernels::cdot(Yt.data(), cm.data(), std::size_t(nlm));
          }
        }
      }
      const cdouble phase =
          std::exp(cdouble(0.0, q * (std::cos(phq) * rx + std::sin(phq) * ry)));
      phi_acc += phase * val;
    }
    acc += q_weights_[iq] * q * phi_acc * (2.0 * M_PI / n_phi_);
  }
  double I = (acc / (4.0 * M_PI * M_PI)).real();
  if (problem_.kind == BoundaryKind::HalfSpaceInternal) {
    SourceDetectorConfig cfg;
    cfg.r0 = problem_.r0;
    cfg.s0 = problem_.s0;
    cfg.r = r;
    cfg.s = s;
    cfg.l_max = std::min(l_max, bulk_->l_max);
    cfg.frame = Frame::SourceDirection;
    I += specific_intensity(*bulk_, cfg);
  }
  return I;
}

}  // namespace rrte
