#include "rrte/medium.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace rrte {

OpticalMedium::OpticalMedium(double mu_a, double mu_s, double g, bool hg,
                             std::vector<double> coeffs)
    : mu_a_(mu_a), mu_s_(mu_s), g_(g), hg_(hg), coeffs_(std::move(coeffs)) {
  if (mu_a_ <= 0.0) throw std::invalid_argument("OpticalMedium: mu_a must be > 0");
  if (mu_s_ < 0.0) throw std::invalid_argument("OpticalMedium: mu_s must be >= 0");
}

OpticalMedium OpticalMedium::henyey_greenstein(double mu_a, double mu_s, double g) {
  if (g < 0.0 || g >= 1.0)
    throw std::invalid_argument("OpticalMedium: need 0 <= g < 1");
  return OpticalMedium(mu_a, mu_s, g, true, {});
}

OpticalMedium OpticalMedium::with_phase_coeffs(double mu_a, double mu_s,
                                               std::vector<double> coeffs) {
  if (coeffs.empty() || std::abs(coeffs[0] - 1.0) > 1e-14)
    throw std::invalid_argument("OpticalMedium: A_0 must be 1");
  for (double a : coeffs)
    if (std::abs(a) > 1.0) throw std::invalid_argument("OpticalMedium: |A_l| <= 1");
  double g = coeffs.size() > 1 ? coeffs[1] : 0.0;
  return OpticalMedium(mu_a, mu_s, g, false, std::move(coeffs));
}

double OpticalMedium::phase_coeff(int l) const {
  if (l < 0) throw std::invalid_argument("phase_coeff: l < 0");
  if (hg_) return std::pow(g_, l);
  return std::size_t(l) < coeffs_.size() ? coeffs_[l] : 0.0;
}

double OpticalMedium::sigma(int l) const {
  return mu_a_ + mu_s_ * (1.0 - phase_coeff(l));
}

double OpticalMedium::transport_mfp() const {
  return 1.0 / (mu_a_ + (1.0 - g_) * mu_s_);
}

std::uint64_t OpticalMedium::phase_digest() const {
  // FNV-1a over the defining bytes
  auto mix = [](std::uint64_t h, const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
    return h;
  };
  std::uint64_t h = 14695981039346656037ULL;
  h = mix(h, &mu_a_, sizeof mu_a_);
  h = mix(h, &mu_s_, sizeof mu_s_);
  int tag = hg_ ? 1 : 0;
  h = mix(h, &tag, sizeof tag);
  if (hg_) {
    h = mix(h, &g_, sizeof g_);
  } else {
    for (double a : coeffs_) h = mix(h, &a, sizeof a);
  }
  return h;
}

}  // namespace rrte
