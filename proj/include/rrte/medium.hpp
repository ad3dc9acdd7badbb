#pragma once

#include <cstdint>
#include <vector>

namespace rrte {

// Homogeneous medium: absorption, scattering, and the phase-function
// expansion coefficients A_l (A_0 = 1).  Henyey-Greenstein media keep the
// closed form A_l = g^l; explicit coefficient lists are zero beyond the list.
class OpticalMedium {
 public:
  static OpticalMedium henyey_greenstein(double mu_a, double mu_s, double g);
  static OpticalMedium with_phase_coeffs(double mu_a, double mu_s,
                                         std::vector<double> coeffs);

  double mu_a() const { return mu_a_; }
  double mu_s() const { return mu_s_; }
  double mu_t() const { return mu_a_ + mu_s_; }
  double g() const { return g_; }
  bool is_henyey_greenstein() const { return hg_; }

  double phase_coeff(int l) const;                 // A_l
  double sigma(int l) const;                       // mu_a + mu_s (1 - A_l)
  double transport_mfp() const;                    // 1/[mu_a + (1-g) mu_s]

  // digest of the phase expansion for cache-file identity checks
  std::uint64_t phase_digest() const;

 private:
  OpticalMedium(double mu_a, double mu_s, double g, bool hg,
                std::vector<double> coeffs);
  double mu_a_ = 0.0;
  double mu_s_ = 0.0;
  double g_ = 0.0;
  bool hg_ = true;
  std::vector<double> coeffs_;  // explicit A_l when !hg_
};

}  // namespace rrte
