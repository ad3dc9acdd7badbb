#pragma once

// Shared mode-sum machinery for the chi tables: per-block Bessel weight
// arrays in log space with a fast pre-exponentiated path, and the
// Clebsch-Gordan product tables folded over +-M.

#include <cmath>
#include <limits>
#include <vector>

#include "rrte/kernels.hpp"
#include "rrte/special_functions.hpp"
#include "rrte/spectral.hpp"

namespace rrte::detail {

// T(l, lp, M, j) = sum_n <l|phi_n(M)><phi_n(M)|lp> k_L(R/lambda_n)/lambda_n^3,
// L = |l-lp| + 2j, for all 0 <= M <= min(l,lp) =: lb, 0 <= j <= lb.
// Values can exceed double range only through the k_L factor; each summed term
// is representable, so sums are done in linear space with log-space factors.
class ModeSumTable {
 public:
  ModeSumTable(const SpectralDecomposition& d, double R, int l_max, int n_modes) {
    l_max_ = l_max;
    offsets_.assign(std::size_t(l_max + 1) * (l_max + 1), 0);
    std::size_t total = 0;
    for (int l = 0; l <= l_max; ++l)
      for (int lp = 0; lp <= l_max; ++lp) {
        offsets_[idx(l, lp)] = total;
        const int lb = std::min(l, lp);
        total += std::size_t(lb + 1) * (lb + 1);
      }
    data_.assign(total, 0.0);

    const int Lmax = 2 * l_max;
    std::vector<double> klog;            // [n][L]
    std::vector<double> wfast;           // per L
    std::vector<double> rows;            // transposed eigenvector components
    for (int M = 0; M <= l_max; ++M) {
      const BlockSpectrum& b = d.block(M);
      const int nm = n_modes < 0 ? b.n_modes() : std::min(n_modes, b.n_modes());
      if (nm == 0) continue;
      const int rdim = std::min(b.dim, l_max - M + 1);
      rows.resize(std::size_t(rdim) * nm);
      for (int i = 0; i < rdim; ++i)
        for (int n = 0; n < nm; ++n)
          rows[std::size_t(i) * nm + n] = b.vec[std::size_t(n) * b.dim + i];
      klog.assign(std::size_t(nm) * (Lmax + 1), -std::numeric_limits<double>::infinity());
      for (int n = 0; n < nm; ++n) {
        const double lam = b.lambda[n];
        if (lam <= 0.0) continue;  // zero modes never enter chi sums
        std::span<double> row(klog.data() + std::size_t(n) * (Lmax + 1), Lmax + 1);
        modified_spherical_bessel_k_log(Lmax, R / lam, row);
        const double l3 = 3.0 * std::log(lam);
        for (int L = 0; L <= Lmax; ++L) row[L] -= l3;
      }
      for (int L = 0; L <= Lmax; ++L) {
        double top = -std::numeric_limits<double>::infinity();
        for (int n = 0; n < nm; ++n)
          top = std::max(top, klog[std::size_t(n) * (Lmax + 1) + L]);
        if (top < -745.0) continue;  // all contributions underflow
        const bool fast = top < 690.0;
        if (fast) {
          wfast.resize(nm);
          for (int n = 0; n < nm; ++n)
            wfast[n] = std::exp(klog[std::size_t(n) * (Lmax + 1) + L]);
        }
        for (int l = M; l <= l_max; ++l) {
          for (int lp = l; lp <= l_max; ++lp) {
            if (L < lp - l || L > l + lp) continue;
            if ((L - (lp - l)) % 2 != 0) continue;
            const int j = (L - (lp - l)) / 2;
            double s;
            if (fast) {
              s = kernels::dot3(rows.data() + std::size_t(l - M) * nm,
                                rows.data() + std::size_t(lp - M) * nm,
                                wfast.data(), nm);
            } else {
              s = 0.0;
              for (int n = 0; n < nm; ++n) {
                const double wl = klog[std::size_t(n) * (Lmax + 1) + L];
                if (wl == -std::numeric_limits<double>::infinity()) continue;
                const std::size_t ia = std::size_t(n) * b.dim + (l - M);
                const std::size_t ib = std::size_t(n) * b.dim + (lp - M);
                const int sg = int(b.vec_sign[ia]) * int(b.vec_sign[ib]);
                if (sg == 0) continue;
                const double ex = wl + b.vec_log[ia] + b.vec_log[ib];
                s += sg * std::exp(ex);
              }
            }
            const int lb = std::min(l, lp);
            data_[offsets_[idx(l, lp)] + std::size_t(M) * (lb + 1) + j] = s;
            if (l != lp)
              data_[offsets_[idx(lp, l)] + std::size_t(M) * (lb + 1) + j] = s;
          }
        }
      }
    }
  }

  // M >= 0, j in [0, min(l,lp)]
  double at(int l, int lp, int M, int j) const {
    const int lb = std::min(l, lp);
    return data_[offsets_[idx(l, lp)] + std::size_t(M) * (lb + 1) + j];
  }

 private:
  std::size_t idx(int l, int lp) const { return std::size_t(l) * (l_max_ + 1) + lp; }

  int l_max_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

// Folded Clebsch-Gordan tables; every entry is pre-summed over the +-M pair
// (the pair members are equal for the L values that survive parity).
//   axis(l, lp, j, a)   = C^{L,0}_{l,a,lp,-a},                 L = |l-lp|+2j
//   src_m(l, lp, j, a)  = C^{lp,a}_{l,a,L,0}
//   src_y(l, lp, j, a)  = C^{L,a}_{l,a,lp,0}
class CgTables {
 public:
  CgTables(int l_max) : l_max_(l_max) {
    offsets_.assign(std::size_t(l_max + 1) * (l_max + 1), 0);
    offsets_y_.assign(std::size_t(l_max + 1) * (l_max + 1), 0);
    std::size_t total = 0, total_y = 0;
    for (int l = 0; l <= l_max; ++l)
      for (int lp = 0; lp <= l_max; ++lp) {
        const int lb = std::min(l, lp);
        offsets_[std::size_t(l) * (l_max + 1) + lp] = total;
        total += std::size_t(lb + 1) * (lb + 1);
        offsets_y_[std::size_t(l) * (l_max + 1) + lp] = total_y;
        total_y += std::size_t(lb + 1) * (l + 1);  // src_y has |m| up to l
      }
    axis_.assign(total, 0.0);
    src_m_.assign(total, 0.0);
    src_y_.assign(total_y, 0.0);
    for (int l = 0; l <= l_max; ++l)
      for (int lp = 0; lp <= l_max; ++lp) {
        const int lb = std::min(l, lp);
        for (int j = 0; j <= lb; ++j) {
          const int L = std::abs(l - lp) + 2 * j;
          for (int a = 0; a <= lb; ++a) {
            const std::size_t k = slot(l, lp, j, a);
            axis_[k] = clebsch_gordan(l, a, lp, -a, L, 0);
            src_m_[k] = clebsch_gordan(l, a, L, 0, lp, a);
          }
          for (int a = 0; a <= l; ++a)
            src_y_[slot_y(l, lp, j, a)] =
                (a <= L) ? clebsch_gordan(l, a, lp, 0, L, a) : 0.0;
        }
      }
  }

  int l_max() const { return l_max_; }
  double axis(int l, int lp, int j, int a) const { return axis_[slot(l, lp, j, a)]; }
  double src_m(int l, int lp, int j, int a) const { return src_m_[slot(l, lp, j, a)]; }
  double src_y(int l, int lp, int j, int a) const { return src_y_[slot_y(l, lp, j, a)]; }

 private:
  std::size_t slot(int l, int lp, int j, int a) const {
    const int lb = std::min(l, lp);
    return offsets_[std::size_t(l) * (l_max_ + 1) + lp] + std::size_t(j) * (lb + 1) + a;
  }
  std::size_t slot_y(int l, int lp, int j, int a) const {
    return offsets_y_[std::size_t(l) * (l_max_ + 1) + lp] + std::size_t(j) * (l + 1) + a;
  }
  int l_max_;
  std::vector<std::size_t> offsets_, offsets_y_;
  std::vector<double> axis_, src_m_, src_y_;
};

const CgTables& cg_tables(int l_max);

}  // namespace rrte::detail
