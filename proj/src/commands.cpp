#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>

#include "rrte/boundary.hpp"
#include "rrte/greens_infinite.hpp"
#include "rrte/plane_wave.hpp"
#include "rrte/spectral.hpp"

namespace rrte::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SpectralDecomposition obtain_decomposition(const RunConfig& rc,
                                           const CommonOptions& opt) {
  DecompParams p{rc.l_max, rc.block_dim, false};
  if (!opt.cache_path.empty()) {
    if (auto d = load_decomposition(opt.cache_path, rc.medium, p)) return std::move(*d);
  }
  SpectralDecomposition d = diagonalize(rc.medium, p);
  if (!opt.cache_path.empty()) save_decomposition(opt.cache_path, d);
  return d;
}

Vec3 direction_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

}  // namespace

int cmd_spectrum(const RunConfig& rc, const CommonOptions& opt, std::ostream& os) {
  SpectralDecomposition d = obtain_decomposition(rc, opt);
  const double inv_mu_t = 1.0 / rc.medium.mu_t();
  os << "M,n,lambda,classification,gershgorin_bound\n";
  for (int M = 0; M <= d.l_max; ++M) {
    const BlockSpectrum& b = d.block(M);
    const double bound = gershgorin_bound(rc.medium, M, b.dim);
    for (int n = 0; n < b.n_modes(); ++n) {
      const char* cls = b.lambda[n] > inv_mu_t ? "discrete" : "continuum-discretized";
      os << M << ',' << n << ',' << fmt(b.lambda[n]) << ',' << cls << ','
         << fmt(bound) << '\n';
    }
  }
  return 0;
}

int cmd_profile(const RunConfig& rc, const CommonOptions& opt, std::ostream& os) {
  const std::string kind = rc.raw.get_string("profile.kind", "forward");
  SpectralDecomposition d = obtain_decomposition(rc, opt);
  SourceDetectorConfig cfg;
  cfg.r0 = {0, 0, 0};
  cfg.s0 = {0, 0, 1};
  cfg.l_max = rc.l_max;
  cfg.n_modes = rc.n_modes;
  cfg.subtract_ballistic = rc.subtract_ballistic && !opt.no_ballistic_subtraction;
  cfg.frame = Frame::SourceDirection;

  const int n = rc.n_angles;
  os << "angle,intensity,l_max,ballistic_subtracted\n";
  bool bad = false;
  if (kind == "forward" || kind == "backward") {
    const double z = rc.raw.get_double("profile.z", 20.0);
    cfg.r = {0, 0, kind == "forward" ? z : -std::abs(z)};
    for (int i = 0; i < n; ++i) {
      const double th = M_PI * i / (n - 1);
      cfg.s = direction_from_angles(th, 0.0);
      const double I = specific_intensity(d, cfg);
      if (!std::isfinite(I)) bad = true;
      os << fmt(th) << ',' << fmt(I) << ',' << rc.l_max << ','
         << (cfg.subtract_ballistic ? 1 : 0) << '\n';
    }
  } else if (kind == "alpha") {
    const double y = rc.raw.get_double("profile.y", 2.0);
    cfg.r = {0, y, 0};
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * i / n;
      cfg.s = {0.0, std::sin(a), std::cos(a)};
      const double I = specific_intensity(d, cfg);
      if (!std::isfinite(I)) bad = true;
      os << fmt(a) << ',' << fmt(I) << ',' << rc.l_max << ','
         << (cfg.subtract_ballistic ? 1 : 0) << '\n';
    }
  } else if (kind == "beta") {
    const double y = rc.raw.get_double("profile.y", 2.0);
    cfg.r = {0, y, 0};
    for (int i = 0; i < n; ++i) {
      const double bturn = M_PI * i / (n - 1);  // beta restricted to [0, pi]
      cfg.s = {std::sin(bturn), std::cos(bturn), 0.0};
      const double I = specific_intensity(d, cfg);
      if (!std::isfinite(I)) bad = true;
      os << fmt(bturn) << ',' << fmt(I) << ',' << rc.l_max << ','
         << (cfg.subtract_ballistic ? 1 : 0) << '\n';
    }
  } else {
    throw config_error("profile.kind must be forward|backward|alpha|beta");
  }
  return bad ? 4 : 0;
}

int cmd_peak_scan(const RunConfig& rc, const CommonOptions& opt, std::ostream& os) {
  SpectralDecomposition d = obtain_decomposition(rc, opt);
  const std::vector<double> ys = rc.raw.get_list("peak.y_list");
  SourceDetectorConfig cfg;
  cfg.r0 = {0, 0, 0};
  cfg.s0 = {0, 0, 1};
  cfg.l_max = rc.l_max;
  cfg.n_modes = rc.n_modes;
  cfg.subtract_ballistic = rc.subtract_ballistic && !opt.no_ballistic_subtraction;
  cfg.frame = Frame::SourceDirection;
  const int n = rc.n_angles;
  os << "y,alpha0\n";
  int rcsafe = 0;
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double y : ys) {
    cfg.r = {0, y, 0};
    std::vector<double> I(n);
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * i / n;
      cfg.s = {0.0, std::sin(a), std::cos(a)};
      I[i] = specific_intensity(d, cfg);
    }
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (I[i] > I[imax]) imax = i;
    // quadratic interpolation around the (periodic) grid maximum
    const double h = 2.0 * M_PI / n;
    const double y0 = I[(imax - 1 + n) % n], y1 = I[imax], y2 = I[(imax + 1) % n];
    const double denom = y0 - 2.0 * y1 + y2;
    if (!(y1 > y0 && y1 > y2) || denom == 0.0) {
      os << fmt(y) << ",nan\n";
      rcsafe = 4;
      continue;
    }
    const double delta = 0.5 * (y0 - y2) / denom;
    const double alpha0 = h * imax + delta * h;
    if (alpha0 >= prev + 1e-9) monotone = false;
    prev = alpha0;
    os << fmt(y) << ',' << fmt(alpha0) << '\n';
  }
  if (!monotone) {
    std::cerr << "peak-scan: alpha0 not monotonically decreasing over the scan\n";
    rcsafe = 4;
  }
  return rcsafe;
}

int cmd_kappa_table(const RunConfig& rc, const CommonOptions& opt, std::ostream& os) {
  SpectralDecomposition d = obtain_decomposition(rc, opt);
  const double q = rc.raw.get_double("kappa.q");
  const double phi_q = rc.raw.get_double("kappa.phi_q", 0.0);
  const double z = rc.raw.get_double("kappa.z");
  KappaMatrix K = kappa(d, {q, phi_q}, z, rc.l_max, rc.n_modes);
  os << "l,m,lp,mp,re,im\n";
  for (int l = 0; l <= rc.l_max; ++l)
    for (int m = -l; m <= l; ++m)
      for (int lp = 0; lp <= rc.l_max; ++lp)
        for (int mp = -lp; mp <= lp; ++mp) {
          const cdouble v = K.at(l, m, lp, mp);
          os << l << ',' << m << ',' << lp << ',' << mp << ',' << fmt(v.real())
             << ',' << fmt(v.imag()) << '\n';
        }
  return 0;
}

int cmd_boundary(const RunConfig& rc, const CommonOptions& opt, std::ostream& os) {
  if (rc.l_max % 2 == 0)
    throw config_error("boundary problems need odd run.l_max");
  const std::string kind = rc.raw.get_string("boundary.kind", "halfspace");
  BoundaryProblem prob;
  prob.l_max = rc.l_max;
  const double th0 = rc.raw.get_double("boundary.s0_theta", 0.0);
  const double ph0 = rc.raw.get_double("boundary.s0_phi", 0.0);
  prob.s0 = direction_from_angles(th0, ph0);
  prob.rho0 = {rc.raw.get_double("boundary.rho0_x", 0.0),
               rc.raw.get_double("boundary.rho0_y", 0.0), 0.0};
  std::shared_ptr<const SpectralDecomposition> bulk;
  if (kind == "halfspace") {
    prob.kind = BoundaryKind::HalfSpaceExternal;
  } else if (kind == "slab") {
    prob.kind = BoundaryKind::SlabExternal;
    prob.L = rc.raw.get_double("boundary.L");
  } else if (kind == "internal") {
    prob.kind = BoundaryKind::HalfSpaceInternal;
    prob.r0 = {rc.raw.get_double("boundary.x0", 0.0),
               rc.raw.get_double("boundary.y0", 0.0),
               rc.raw.get_double("boundary.z0")};
    bulk = std::make_shared<SpectralDecomposition>(obtain_decomposition(rc, opt));
  } else {
    throw config_error("boundary.kind must be halfspace|slab|internal");
  }
  const std::string method_s = rc.raw.get_string("boundary.method", "parity");
  const HalfSpaceMethod method = method_s == "pseudoinverse"
                                     ? HalfSpaceMethod::PseudoInverse
                                     : HalfSpaceMethod::ParityFilter;
  auto basis = std::make_shared<EvanescentBasis>(rc.medium, rc.l_max);
  BoundaryQuadrature quad{rc.q_max, rc.n_q, rc.n_phi};
  BoundarySolution sol(basis, bulk, prob, quad, method);

  const std::vector<double> zs = rc.raw.get_list("boundary.z_list");
  const std::vector<double> ths = rc.raw.get_list("boundary.theta_list");
  const double x = rc.raw.get_double("boundary.x", 0.0);
  const double y = rc.raw.get_double("boundary.y", 0.0);
  const double phs = rc.raw.get_double("boundary.phi_s", 0.0);
  os << "x,y,z,theta,phi,intensity,boundary_residual\n";
  for (double z : zs)
    for (double th : ths) {
      const Vec3 r{x, y, z};
      const Vec3 s = direction_from_angles(th, phs);
      const double I = sol.intensity(r, s);
      os << fmt(x) << ',' << fmt(y) << ',' << fmt(z) << ',' << fmt(th) << ','
         << fmt(phs) << ',' << fmt(I) << ',' << fmt(sol.enforced_residual()) << '\n';
    }
  return 0;
}

}  // namespace rrte::cli
