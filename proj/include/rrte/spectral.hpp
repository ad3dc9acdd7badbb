#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <vector>

#include "rrte/medium.hpp"

namespace rrte {

// (M, n) label of one retained mode: azimuthal block M, index n within the
// positive-eigenvalue set of that block.
struct ModeIndex {
  int M = 0;
  int n = 0;
};

// b_{lm} = sqrt((l^2 - m^2)/(4 l^2 - 1)), the z-coupling matrix element.
double coupling_b(int l, int m);

// beta_l(M) = b_{lM} / sqrt(sigma_l sigma_{l-1})
double beta(const OpticalMedium& medium, int l, int M);

// Symmetric tridiagonal block B(M): zero diagonal, off-diagonal
// beta_{|M|+1}(M), ..., rows l = |M| .. |M|+dim-1.
struct TridiagonalBlock {
  int M = 0;
  int dim = 0;
  std::vector<double> off;  // dim-1 entries, off[i] couples rows i and i+1
};

TridiagonalBlock build_block(const OpticalMedium& medium, int M, int dim);

// Eigen-decomposition of one block restricted to lambda >= 0.  Eigenvalues
// are sorted descending; eigenvectors are orthonormal columns with the first
// nonzero component positive.  A zero eigenvalue exists only for odd dim and
// is kept only when requested (boundary-problem bases).
struct BlockSpectrum {
  int M = 0;
  int dim = 0;
  std::vector<double> lambda;   // n_modes entries
  std::vector<double> vec;      // dim * n_modes, column-major
  std::vector<double> vec_log;  // log|vec|, -inf for exact zeros
  std::vector<signed char> vec_sign;

  int n_modes() const { return int(lambda.size()); }
  // <l | phi_n(M)>, zero outside the stored band
  double component(int l, int n) const {
    const int i = l - std::abs(M);
    if (i < 0 || i >= dim) return 0.0;
    return vec[std::size_t(n) * dim + i];
  }
  const double* column(int n) const { return vec.data() + std::size_t(n) * dim; }
};

struct DecompParams {
  int l_max = 0;
  int block_dim = 1000;       // even; rejected otherwise
  bool keep_zero_modes = false;
};

struct SpectralDecomposition {
  OpticalMedium medium;
  int l_max = 0;
  int block_dim = 0;
  std::vector<BlockSpectrum> blocks;  // index |M| = 0 .. l_max; B(M) = B(-M)

  const BlockSpectrum& block(int M) const { return blocks[std::size_t(std::abs(M))]; }
};

// Diagonalize all blocks |M| <= l_max.  block_dim must be even so that no
// zero eigenvalue occurs and Omega+/Omega- partition cleanly.
SpectralDecomposition diagonalize(const OpticalMedium& medium, const DecompParams& p);

// Blocks truncated at l <= l_max (dim = l_max+1-|M|); odd-dimensional blocks
// carry one zero mode, which is kept.  This is the basis used by the
// boundary-value solvers.
SpectralDecomposition truncated_decomposition(const OpticalMedium& medium, int l_max);

// <lm | psi_{Mn}> = delta_{mM} <l | phi_n(M)>
double lift_eigenvector(const SpectralDecomposition& d, ModeIndex mu, int l, int m);

// Gershgorin row-sum bound max_l [beta_l(M) + beta_{l+1}(M)] over the block.
double gershgorin_bound(const OpticalMedium& medium, int M, int dim);

// --- decomposition cache file (binary, host-endian) ---
void save_decomposition(const std::filesystem::path& path,
                        const SpectralDecomposition& d);
std::optional<SpectralDecomposition> load_decomposition(
    const std::filesystem::path& path, const OpticalMedium& medium,
    const DecompParams& p);

}  // namespace rrte
