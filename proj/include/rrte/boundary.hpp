#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "rrte/geometry.hpp"
#include "rrte/plane_wave.hpp"
#include "rrte/special_functions.hpp"
#include "rrte/spectral.hpp"

namespace rrte {

enum class BoundaryKind { HalfSpaceExternal, SlabExternal, HalfSpaceInternal };
enum class HalfSpaceMethod { ParityFilter, PseudoInverse };

struct BoundaryProblem {
  BoundaryKind kind = BoundaryKind::HalfSpaceExternal;
  double L = std::numeric_limits<double>::infinity();  // slab thickness
  Vec3 s0{0, 0, 1};   // source direction; external problems need s0.z > 0
  Vec3 rho0{};        // beam entry point (external, z component ignored)
  Vec3 r0{};          // internal point source, r0.z > 0
  int l_max = 7;      // odd
};

// Expansion basis for boundary problems: modes of the l<=l_max truncated
// blocks with lambda >= 0 (zero modes of odd-dimensional blocks included,
// once per signed M).  Mode count is (l_max+1)(l_max+2)/2.
class EvanescentBasis {
 public:
  EvanescentBasis(const OpticalMedium& medium, int l_max);

  int l_max() const { return l_max_; }
  int n_lm() const { return nlm_; }
  int n_modes() const { return int(modes_.size()); }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  const SpectralDecomposition& decomposition() const { return trunc_; }
  const HalfRangeOverlapTable& overlap() const { return overlap_; }

  double lambda(int mu) const;
  double decay(int mu, double q) const;  // Q_mu(q), +inf for zero modes

  // Y_lm coefficient vectors of the mode angular content at phi_q = 0:
  //   cplus:  I+ content, A(xhat) eta_mu(q)
  //   cminus: I- content, (-1)^l <l,-m|eta_mu(q)> / sqrt(sigma_l)
  // (the (-1)^M of I- is included in cminus)
  Eigen::VectorXcd cplus(int mu, double q) const;
  Eigen::VectorXcd cminus(int mu, double q) const;

  // <lm|B|x> for a coefficient vector over (l,m)
  Eigen::VectorXcd apply_overlap(const Eigen::VectorXcd& x) const;
  // rows with l = m (mod 2)
  const std::vector<int>& parity_rows() const { return parity_rows_; }
  // projector rows onto the dominant (alpha >= 1/2) eigenvectors of B
  const Eigen::MatrixXd& dominant_overlap_rows() const { return xi_rows_; }

 private:
  int l_max_, nlm_;
  SpectralDecomposition trunc_;
  HalfRangeOverlapTable overlap_;
  std::vector<ModeIndex> modes_;
  std::vector<int> parity_rows_;
  Eigen::MatrixXd xi_rows_;  // T x 2N
};

struct BoundaryCoefficients {
  double q = 0.0;
  Eigen::VectorXcd f_plus;   // per basis mode, phi_q = 0, f-substituted
  Eigen::VectorXcd f_minus;  // slab only; scaled so the mode is e^{+Q(z-L)}
};

// G F = b over all (l,m) rows at phi_q = 0; columns indexed by basis modes.
struct HalfspaceSystem {
  Eigen::MatrixXcd G;    // 2N x T
  Eigen::VectorXcd rhs;  // 2N
};

HalfspaceSystem assemble_halfspace_system(const EvanescentBasis& basis, double q,
                                          const Vec3& s0);

BoundaryCoefficients solve_halfspace_external(const EvanescentBasis& basis, double q,
                                              const Vec3& s0, HalfSpaceMethod method);

BoundaryCoefficients solve_slab_external(const EvanescentBasis& basis, double q,
                                         const Vec3& s0, double L);

// Internal point source at r0 (z0 > 0, transverse part handled by the caller
// through the f-substitution); `bulk` supplies the infinite-medium modes for
// the source term.
BoundaryCoefficients solve_halfspace_internal(const EvanescentBasis& basis,
                                              const SpectralDecomposition& bulk,
                                              double q, const Vec3& r0, const Vec3& s0);

struct BoundaryQuadrature {
  double q_max = -1.0;  // <0: auto
  int n_q = 64;
  int n_phi = -1;       // <0: auto (4 l_max + 4)
};

// Solved boundary problem: per-|q| coefficients plus everything needed to
// evaluate the intensity anywhere inside the medium.
class BoundarySolution {
 public:
  BoundarySolution(std::shared_ptr<const EvanescentBasis> basis,
                   std::shared_ptr<const SpectralDecomposition> bulk,
                   BoundaryProblem problem, BoundaryQuadrature quad,
                   HalfSpaceMethod method);

  // specific intensity at (r, s); r inside the medium
  double intensity(const Vec3& r, const Vec3& s) const;

  // moment residual of the boundary condition at the indicated surface,
  // max over q nodes of |B I - data| restricted to the enforced rows,
  // relative to the rhs scale
  double enforced_residual() const { return enforced_residual_; }
  // same over all 2N rows (truncation diagnostic)
  double full_residual() const { return full_residual_; }

  const BoundaryCoefficients& coefficients(int q_index) const { return coeffs_[q_index]; }
  const std::vector<double>& q_nodes() const { return q_nodes_; }

 private:
  std::shared_ptr<const EvanescentBasis> basis_;
  std::shared_ptr<const SpectralDecomposition> bulk_;
  BoundaryProblem problem_;
  BoundaryQuadrature quad_;
  std::vector<double> q_nodes_, q_weights_;
  int n_phi_ = 0;
  std::vector<BoundaryCoefficients> coeffs_;           // [iq * n_phi + ip]
  std::vector<Eigen::VectorXcd> cplus0_, cminus0_;     // [iq * T + mu], phi_q = 0
  double enforced_residual_ = 0.0, full_residual_ = 0.0;
};

}  // namespace rrte
