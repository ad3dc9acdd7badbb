#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rrte/greens_infinite.hpp"

using namespace rrte;

namespace {

OpticalMedium model_medium() { return OpticalMedium::henyey_greenstein(0.5, 1.0, 0.5); }

const SpectralDecomposition& model_decomp() {
  static SpectralDecomposition d = diagonalize(model_medium(), {10, 400, false});
  return d;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  return v.normalized();
}

// Rodrigues rotation of v about unit axis by angle a
Vec3 rotate_about(const Vec3& v, const Vec3& axis, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

}  // namespace

TEST_CASE("chi axis frame is diagonal in m and reciprocity-symmetric") {
  const auto& d = model_decomp();
  CHECK(chi_axis_frame(d, 1.3, 2, 1, 3, 2) == 0.0);
  for (int l = 0; l <= 4; ++l)
    for (int lp = 0; lp <= 4; ++lp)
      for (int m = -std::min(l, lp); m <= std::min(l, lp); ++m) {
        const double a = chi_axis_frame(d, 1.3, l, m, lp, m);
        const double b = chi_axis_frame(d, 1.3, lp, m, l, m);
        const double sg = ((l + lp) % 2 == 0) ? 1.0 : -1.0;
        CHECK(b == doctest::Approx(sg * a).epsilon(1e-10));
      }
  CHECK_THROWS_AS(chi_axis_frame(d, 0.0, 0, 0, 0, 0), std::domain_error);
}

TEST_CASE("chi tables match the element functions") {
  const auto& d = model_decomp();
  ChiAxisTable ax(d, 1.7, 5);
  for (int l = 0; l <= 5; ++l)
    for (int lp = 0; lp <= 5; ++lp)
      for (int m = -std::min(l, lp); m <= std::min(l, lp); ++m)
        CHECK(ax.at(l, m, lp, m) ==
              doctest::Approx(chi_axis_frame(d, 1.7, l, m, lp, m)).epsilon(1e-12));
  const Vec3 r{0.4, -0.2, 1.1};
  ChiSourceTable st(d, r, 4);
  for (int l = 0; l <= 4; ++l)
    for (int m = -l; m <= l; ++m)
      for (int lp = 0; lp <= 4; ++lp) {
        const cdouble a = st.at(l, m, lp);
        const cdouble b = chi_source_frame(d, r, l, m, lp);
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
      }
}

TEST_CASE("on-axis source frame has only m = 0 elements") {
  const auto& d = model_decomp();
  const Vec3 r{0.0, 0.0, 1.5};
  for (int l = 0; l <= 4; ++l)
    for (int m = -l; m <= l; ++m)
      for (int lp = 0; lp <= 4; ++lp) {
        const cdouble v = chi_source_frame(d, r, l, m, lp);
        if (m != 0) CHECK(std::abs(v) < 1e-14);
      }
}

TEST_CASE("the two frame representations agree") {
  const auto& d = model_decomp();
  std::mt19937_64 rng(5);
  const int l_max = 8;
  for (int trial = 0; trial < 6; ++trial) {
    std::uniform_real_distribution<double> ur(0.8, 2.2);
    Vec3 r = random_unit(rng) * ur(rng);
    Vec3 s = random_unit(rng), s0 = random_unit(rng);
    SourceDetectorConfig cfg;
    cfg.r0 = {0, 0, 0};
    cfg.r = r;
    cfg.s = s;
    cfg.s0 = s0;
    cfg.l_max = l_max;
    cfg.frame = Frame::SourceDetectorAxis;
    const double Ia = specific_intensity(d, cfg);
    cfg.frame = Frame::SourceDirection;
    const double Is = specific_intensity(d, cfg);
    CHECK(Ia == doctest::Approx(Is).epsilon(1e-8));
  }
}

TEST_CASE("reciprocity") {
  const auto& d = model_decomp();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    std::uniform_real_distribution<double> ur(0.9, 2.0);
    SourceDetectorConfig cfg;
    cfg.r0 = random_unit(rng) * 0.3;
    cfg.r = cfg.r0 + random_unit(rng) * ur(rng);
    cfg.s = random_unit(rng);
    cfg.s0 = random_unit(rng);
    cfg.l_max = 10;
    cfg.frame = Frame::SourceDirection;
    const double I1 = specific_intensity(d, cfg);
    SourceDetectorConfig rev = cfg;
    std::swap(rev.r0, rev.r);
    rev.s0 = -cfg.s;
    rev.s = -cfg.s0;
    const double I2 = specific_intensity(d, rev);
    CHECK(I1 == doctest::Approx(I2).epsilon(1e-8));
  }
}

TEST_CASE("rotational invariance about the source-detector line") {
  const auto& d = model_decomp();
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    SourceDetectorConfig cfg;
    cfg.r0 = {0, 0, 0};
    const Vec3 axis = random_unit(rng);
    cfg.r = axis * 1.4;
    cfg.s = random_unit(rng);
    cfg.s0 = random_unit(rng);
    cfg.l_max = 8;
    cfg.frame = Frame::SourceDirection;
    const double I1 = specific_intensity(d, cfg);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
    const double psi = ua(rng);
    SourceDetectorConfig rot = cfg;
    rot.s = rotate_about(cfg.s, axis, psi);
    rot.s0 = rotate_about(cfg.s0, axis, psi);
    const double I2 = specific_intensity(d, rot);
    CHECK(I1 == doctest::Approx(I2).epsilon(1e-10));
  }
}

TEST_CASE("ballistic subtraction") {
  CHECK(ballistic_subtraction(2, 1, 3, 0, 1.0, 1.5) == 0.0);
  CHECK(ballistic_subtraction(2, 0, 3, 1, 1.0, 1.5) == 0.0);
  const double mu_t = model_medium().mu_t();
  CHECK(ballistic_subtraction(0, 0, 0, 0, 1.0, mu_t) ==
        doctest::Approx(std::exp(-mu_t) / (4.0 * M_PI)));
  CHECK(ballistic_subtraction(2, 0, 1, 0, 2.0, mu_t) ==
        doctest::Approx(std::sqrt(15.0) * std::exp(-2.0 * mu_t) / (16.0 * M_PI)));
  // adding the term back reproduces the unsubtracted table exactly
  const auto& d = model_decomp();
  const Vec3 r{0.0, 0.0, 1.2};
  ChiSourceTable plain(d, r, 3);
  ChiSourceTable sub(d, r, 3);
  sub.subtract_ballistic(mu_t);
  for (int l = 0; l <= 3; ++l)
    for (int lp = 0; lp <= 3; ++lp) {
      const cdouble back =
          sub.at(l, 0, lp) + ballistic_subtraction(l, 0, lp, 0, 1.2, mu_t);
      CHECK(std::abs(back - plain.at(l, 0, lp)) <= 1e-15 * (1.0 + std::abs(back)));
    }
}

TEST_CASE("large-R decay rate of the fundamental element") {
  const auto& d = model_decomp();
  const double lam_max = d.block(0).lambda[0];
  const double R = 30.0;
  const double c1 = chi_axis_frame(d, R, 0, 0, 0, 0);
  const double c2 = chi_axis_frame(d, 2.0 * R, 0, 0, 0, 0);
  const double drop = std::log(c2) - std::log(c1);
  CHECK(std::abs(drop - (-R / lam_max)) < 0.05 * (R / lam_max));
}

TEST_CASE("diffusion limit at l_max = 1") {
  const auto& d = model_decomp();
  SourceDetectorConfig cfg;
  cfg.r0 = {0, 0, 0};
  cfg.r = {0, 0, 2.0};
  cfg.s0 = {0, 0, 1};
  cfg.l_max = 1;
  cfg.frame = Frame::SourceDirection;
  auto I_of = [&](double th) {
    cfg.s = {std::sin(th), 0.0, std::cos(th)};
    return specific_intensity(d, cfg);
  };
  const double a = 0.5 * (I_of(0.0) + I_of(M_PI));
  const double b = 0.5 * (I_of(0.0) - I_of(M_PI));
  for (double th = 0.1; th < M_PI; th += 0.3)
    CHECK(std::abs(I_of(th) - (a + b * std::cos(th))) < 1e-10 * std::abs(a));
}

TEST_CASE("degenerate detector direction along zhat") {
  const auto& d = model_decomp();
  SourceDetectorConfig cfg;
  cfg.r0 = {0, 0, 0};
  cfg.r = {0.3, 0.0, 1.2};
  cfg.s0 = {0, 0, 1};
  cfg.s = {0, 0, 1};
  cfg.l_max = 6;
  cfg.frame = Frame::SourceDirection;
  CHECK(std::isfinite(specific_intensity(d, cfg)));
  cfg.s = {0, 0, -1};
  CHECK(std::isfinite(specific_intensity(d, cfg)));
}

TEST_CASE("mode cap reduces smoothly") {
  const auto& d = model_decomp();
  // with all modes vs a high cap the result barely changes at moderate R
  SourceDetectorConfig cfg;
  cfg.r0 = {0, 0, 0};
  cfg.r = {0, 0.4, 1.9};
  cfg.s0 = {0, 0, 1};
  cfg.s = {0, 1, 0};
  cfg.l_max = 6;
  cfg.frame = Frame::SourceDirection;
  const double full = specific_intensity(d, cfg);
  cfg.n_modes = 150;
  const double capped = specific_intensity(d, cfg);
  CHECK(capped == doctest::Approx(full).epsilon(1e-6));
}
