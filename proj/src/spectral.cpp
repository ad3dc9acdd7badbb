#include "rrte/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rrte/errors.hpp"

namespace rrte {

double coupling_b(int l, int m) {
  if (l < 1) throw std::invalid_argument("coupling_b: l must be >= 1");
  if (std::abs(m) > l) throw std::invalid_argument("coupling_b: |m| > l");
  return std::sqrt((double(l) * l - double(m) * m) / (4.0 * double(l) * l - 1.0));
}

double beta(const OpticalMedium& medium, int l, int M) {
  if (l < 1 || std::abs(M) > l) throw std::invalid_argument("beta: bad indices");
  return coupling_b(l, M) / std::sqrt(medium.sigma(l) * medium.sigma(l - 1));
}

TridiagonalBlock build_block(const OpticalMedium& medium, int M, int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("build_block: dim must be even and >= 2");
  TridiagonalBlock b;
  b.M = M;
  b.dim = dim;
  b.off.resize(dim - 1);
  const int aM = std::abs(M);
  for (int i = 0; i + 1 < dim; ++i) b.off[i] = beta(medium, aM + i + 1, M);
  return b;
}

namespace {

// Eigen-decompose a zero-diagonal symmetric tridiagonal block and keep the
// lambda >= 0 part.  keep_zero retains the zero mode of odd-dimensional blocks.
BlockSpectrum decompose_block(const OpticalMedium& medium, int M, int dim,
                              bool keep_zero) {
  const int aM = std::abs(M);
  std::vector<double> diag(dim, 0.0), off(std::max(dim - 1, 0));
  for (int i = 0; i + 1 < dim; ++i) off[i] = beta(medium, aM + i + 1, M);
  std::vector<double> z(std::size_t(dim) * dim);
  lapack_int info = LAPACKE_dstedc(LAPACK_COL_MAJOR, 'I', dim, diag.data(),
                                   off.data(), z.data(), dim);
  if (info != 0)
    throw numeric_error("eigensolver failed for block M=" + std::to_string(M) +
                        " (dstedc info=" + std::to_string(info) + ")");
  // diag now holds ascending eigenvalues; columns of z the eigenvectors
  BlockSpectrum out;
  out.M = M;
  out.dim = dim;
  const double tol = 1e-12 * std::max(1.0, std::abs(diag[dim - 1]));
  std::vector<int> order;
  for (int i = dim - 1; i >= 0; --i) {
    if (diag[i] > tol) order.push_back(i);            // descending positive
  }
  if (keep_zero) {
    for (int i = 0; i < dim; ++i)
      if (std::abs(diag[i]) <= tol) order.push_back(i);
  }
  out.lambda.reserve(order.size());
  out.vec.reserve(order.size() * std::size_t(dim));
  for (int idx : order) {
    double lam = diag[idx];
    out.lambda.push_back(std::abs(lam) <= tol ? 0.0 : lam);
    const double* col = z.data() + std::size_t(idx) * dim;
    // sign convention: first component of magnitude > 1e-12 positive
    double sign = 1.0;
    for (int i = 0; i < dim; ++i) {
      if (std::abs(col[i]) > 1e-12) {
        sign = col[i] > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (int i = 0; i < dim; ++i) out.vec.push_back(sign * col[i]);
  }
  out.vec_log.resize(out.vec.size());
  out.vec_sign.resize(out.vec.size());
  for (std::size_t i = 0; i < out.vec.size(); ++i) {
    const double v = out.vec[i];
    out.vec_sign[i] = v > 0 ? 1 : (v < 0 ? -1 : 0);
    out.vec_log[i] = v == 0.0 ? -std::numeric_limits<double>::infinity()
                              : std::log(std::abs(v));
  }
  return out;
}

}  // namespace

SpectralDecomposition diagonalize(const OpticalMedium& medium, const DecompParams& p) {
  if (p.l_max < 0) throw std::invalid_argument("diagonalize: l_max < 0");
  if (p.block_dim < 2 || p.block_dim % 2 != 0)
    throw std::invalid_argument("diagonalize: block_dim must be even and >= 2");
  SpectralDecomposition d{medium, p.l_max, p.block_dim, {}};
  d.blocks.reserve(p.l_max + 1);
  for (int M = 0; M <= p.l_max; ++M)
    d.blocks.push_back(decompose_block(medium, M, p.block_dim, false));
  return d;
}

SpectralDecomposition truncated_decomposition(const OpticalMedium& medium, int l_max) {
  if (l_max < 0) throw std::invalid_argument("truncated_decomposition: l_max < 0");
  SpectralDecomposition d{medium, l_max, 0, {}};
  d.blocks.reserve(l_max + 1);
  for (int M = 0; M <= l_max; ++M) {
    const int dim = l_max + 1 - M;
    if (dim == 1) {
      // 1x1 zero matrix: the single (zero) mode
      BlockSpectrum b;
      b.M = M;
      b.dim = 1;
      b.lambda = {0.0};
      b.vec = {1.0};
      b.vec_log = {0.0};
      b.vec_sign = {1};
      d.blocks.push_back(std::move(b));
    } else {
      d.blocks.push_back(decompose_block(medium, M, dim, true));
    }
  }
  return d;
}

double lift_eigenvector(const SpectralDecomposition& d, ModeIndex mu, int l, int m) {
  const BlockSpectrum& b = d.block(mu.M);
  if (mu.n < 0 || mu.n >= b.n_modes())
    throw std::invalid_argument("lift_eigenvector: bad mode index");
  if (m != mu.M) return 0.0;
  return b.component(l, mu.n);
}

double gershgorin_bound(const OpticalMedium& medium, int M, int dim) {
  const int aM = std::abs(M);
  double best = 0.0;
  for (int i = 0; i < dim; ++i) {
    const int l = aM + i;
    double row = 0.0;
    if (l > aM) row += beta(medium, l, M);
    if (i + 1 < dim) row += beta(medium, l + 1, M);
    best = std::max(best, row);
  }
  return best;
}

}  // namespace rrte
