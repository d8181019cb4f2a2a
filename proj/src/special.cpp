#include "eisenlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eisenlab/error.hpp"
#include "eisenlab/parallel.hpp"

namespace eisenlab {

namespace {

const double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                            771.32342877765313,   -176.61502916214059,   12.507343278686905,
                            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
const double kLogSqrt2Pi = 0.91893853320467274178;
const double kLn2 = 0.69314718055994530942;

// log sin(pi z) without overflow for large |Im z|.
cplx log_sin_pi(cplx z) {
  const cplx I(0, 1);
  if (z.imag() >= 0) return -I * kPi * z + std::log((std::exp(2.0 * I * kPi * z) - 1.0) / (2.0 * I));
  return I * kPi * z + std::log((1.0 - std::exp(-2.0 * I * kPi * z)) / (2.0 * I));
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real()))
    throw Error(ErrorKind::Pole, "Gamma pole at a nonpositive integer");
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  cplx w = z - 1.0;
  cplx x = kLanczos[0];
  for (int k = 1; k < 9; ++k) x += kLanczos[k] / (w + double(k));
  cplx tt = w + 7.5;
  return kLogSqrt2Pi + (w + 0.5) * std::log(tt) - tt + std::log(x);
}

cplx complex_gamma(cplx z) { return std::exp(log_gamma(z)); }

double vol_sphere(int n) {
  double h = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

cplx constant_C(cplx s, int n) {
  double hn = 0.5 * n;
  return std::exp(-hn * std::log(kPi) - s * kLn2 + log_gamma(s) - log_gamma(s - hn));
}

double plancherel_alpha(double t, int n) {
  double hn = 0.5 * n;
  double pre = std::pow(kPi, -hn) * std::tgamma(hn) / std::tgamma(double(n));
  cplx lg = log_gamma(cplx(hn, t)) + log_gamma(cplx(hn, -t)) - log_gamma(cplx(0, t)) - log_gamma(cplx(0, -t));
  return pre * std::exp(lg).real();
}

double plancherel_alpha_via_C(double t, int n) {
  return std::norm(constant_C(cplx(0.5 * n, t), n)) * vol_sphere(n);
}

cplx constant_M(double t, int n) {
  double hn = 0.5 * n;
  cplx e = -0.5 * (n + 1) * std::log(kPi) + cplx(1.0 - hn, -t) * kLn2 + log_gamma(cplx(hn, t)) -
           log_gamma(cplx(0.5, t));
  return std::exp(e);
}

cplx constant_c0(double sigma, int n) {
  return std::sqrt(kPi) * std::polar(1.0, -kPi / 4) * std::pow(1.0 - sigma * sigma, -0.25 * n);
}

cplx constant_L(double t, int n) {
  double hn = 0.5 * n;
  cplx e = -0.5 * (n - 1) * std::log(std::abs(t)) + cplx(hn + 3.0, -2.0 * t) * kLn2 + 2.0 * log_gamma(cplx(0, t)).real() -
           log_gamma(cplx(0.5, t)) - log_gamma(cplx(hn, -t));
  return std::exp(e);
}

cplx constant_H0(int n) {
  return std::pow(2.0, 0.5 * n) * std::pow(kPi, 0.5 * (n - 1)) * std::polar(1.0, (n - 1) * kPi / 4);
}

double geodesic_coefficient(double t) {
  return 1.0 / (std::sqrt(2.0) * std::norm(constant_C(cplx(0.5, t), 1)));
}

namespace {

struct Side {
  double sigma, t, n;
  bool right;

  double A(double v2) const { return right ? sigma * (2 * v2 - 1) + 1 : sigma * (1 - 2 * v2) + 1; }

  // 2 e^{(1+2it)x} (1-v^2)^{it-1/2} A^{-n/2-it}, v = e^x.
  cplx integrand(double x) const {
    double v2 = std::exp(2 * x);
    double l1 = std::log1p(-v2), lA = std::log(A(v2));
    double re = x - 0.5 * l1 - 0.5 * n * lA;
    double im = 2 * t * x + t * l1 - t * lA;
    return 2.0 * std::exp(re) * cplx(std::cos(im), std::sin(im));
  }

  double phase_slope(double v) const {
    double v2 = v * v;
    double dA = right ? 4 * sigma * v : -4 * sigma * v;
    return 2.0 - 2.0 * v2 / (1.0 - v2) - v * dA / A(v2);
  }
};

cplx panel_sum(const Side& s, double x0, double x1, long panels) {
  const GaussRule& g = gauss_legendre(8);
  double h = (x1 - x0) / panels;
  cplx acc = 0;
  for (long p = 0; p < panels; ++p) {
    double c = x0 + (p + 0.5) * h;
    cplx ps = 0;
    for (size_t j = 0; j < g.x.size(); ++j) ps += g.w[j] * s.integrand(c + 0.5 * h * g.x[j]);
    acc += ps;
  }
  return acc * (0.5 * h);
}

}  // namespace

KernelEvaluation kernel_F(double sigma, double t, double tol, int n) {
  if (!(sigma > 0 && sigma <= 1.0 - 1e-3))
    throw Error(ErrorKind::InvalidConfiguration, "kernel_F needs 0 < sigma <= 1 - 1e-3");
  if (!(t > 0)) throw Error(ErrorKind::InvalidConfiguration, "kernel_F needs t > 0");
  if (!(tol > 0)) throw Error(ErrorKind::InvalidConfiguration, "kernel_F needs tol > 0");

  cplx pref = constant_M(t, n) * std::exp(cplx(0.5 * n, t) * std::log(sigma));
  double apref = std::abs(pref);
  const double x_max = -0.5 * std::log(2.0);
  const double vmax = std::sqrt(0.5);

  Side sides[2] = {{sigma, t, double(n), false}, {sigma, t, double(n), true}};
  double pmax = 0;
  for (const Side& s : sides)
    for (int i = 1; i <= 256; ++i) pmax = std::max(pmax, std::abs(s.phase_slope(vmax * i / 256.0)));

  // Endpoint pieces below v_min use h(v) = h(0) + O(v^2); choose v_min so the O(v^3) remainder is tiny.
  double h2 = (t + 1.0) * (1.0 + 2.0 * sigma / (1.0 - sigma));
  double hmax = std::pow(1.0 - sigma, -0.5 * n);
  double vmin = std::cbrt(0.03 * tol / (apref * hmax * h2 + 1e-300));
  vmin = std::clamp(vmin, 1e-12, 1e-2);
  double x_min = std::log(vmin);
  double tail_err = 2.0 * apref * hmax * h2 * vmin * vmin * vmin;

  cplx tails = 0;
  for (const Side& s : sides) {
    double a0 = s.right ? 1.0 - sigma : 1.0 + sigma;
    cplx h0 = std::exp(-cplx(0.5 * n, t) * std::log(a0));
    tails += 2.0 * h0 * std::exp(cplx(1.0, 2.0 * t) * x_min) / cplx(1.0, 2.0 * t);
  }

  double hwidth = std::min(0.25, kPi / (4.0 * t * pmax));
  long panels = static_cast<long>(std::ceil((x_max - x_min) / hwidth));
  auto quad = [&](long np) { return panel_sum(sides[0], x_min, x_max, np) + panel_sum(sides[1], x_min, x_max, np); };

  cplx q1 = quad(panels);
  const long max_panels = 1L << 22;
  for (;;) {
    cplx q2 = quad(2 * panels);
    double err = apref * std::abs(q2 - q1) + tail_err;
    if (err <= tol) return {sigma, t, pref * (q2 + tails), err};
    panels *= 2;
    if (panels > max_panels)
      throw Error(ErrorKind::ToleranceNotMet,
                  "kernel_F: tolerance not met, achieved " + std::to_string(err));
    q1 = q2;
  }
}

double spectral_kernel_from_F(cplx F, double t, double /*d*/) {
  cplx twist = std::exp(cplx(0, 2.0 * t * kLn2));
  return -t * (twist * F).imag() / std::norm(constant_C(cplx(0.5, t), 1));
}

SpectralKernelTable::SpectralKernelTable(double t, double r_lo, double r_hi, double tol) : t_(t) {
  if (!(r_lo > 0 && r_hi > r_lo)) throw Error(ErrorKind::InvalidConfiguration, "kernel table needs 0 < r_lo < r_hi");
  inv_c2_ = 1.0 / std::norm(constant_C(cplx(0.5, t), 1));
  twist_ = std::exp(cplx(0, 2.0 * t * kLn2));
  std::vector<double> edges{r_lo};
  while (edges.back() < r_hi) {
    double r = edges.back();
    // The envelope is singular at r = 0, so panels also shrink geometrically toward it.
    double w = std::min({1.0, 3.0 / (t * sigma_of(r)), 0.5 * r});
    edges.push_back(std::min(r_hi, r + w));
  }
  table_ = ChebTable(edges, 16);
  const auto& pts = table_.sample_points();
  std::vector<cplx> vals(pts.size());
  std::vector<double> errs(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    KernelEvaluation ev = kernel_F(sigma_of(pts[i]), t, tol);
    vals[i] = ev.value * std::polar(1.0, t * pts[i]);
    errs[i] = ev.quadrature_error;
  });
  err_ = *std::max_element(errs.begin(), errs.end());
  table_.build(vals);
}

cplx SpectralKernelTable::F(double r) const { return table_(r) * std::polar(1.0, -t_ * r); }

double SpectralKernelTable::kernel(double d) const { return -t_ * (twist_ * F(d)).imag() * inv_c2_; }

double SpectralKernelTable::kernel_literal(double d) const { return -4.0 * t_ * F(d).imag() * inv_c2_; }

cplx boundary_pairing_kernel(double d, double t, double step) {
  // Integrate in x = log(th) over [th_min, pi]; base = e^{-d} + 2 sinh d sin^2(th/2).
  double sh = std::sinh(d);
  double th_min = 1e-6 * std::exp(-d);
  cplx s(-0.5, t);
  auto base = [&](double th) {
    double h = std::sin(0.5 * th);
    return std::exp(-d) + 2.0 * sh * h * h;
  };
  auto rate = [&](double x) {
    double th = std::exp(x);
    return std::abs(t) * th * sh * std::sin(th) / base(th) + 1.0;
  };
  const GaussRule& g = gauss_legendre(8);
  double x = std::log(th_min), x_end = std::log(kPi);
  cplx acc = 0;
  while (x < x_end) {
    double h = std::min(0.25, step / rate(x));
    h = std::min(h, step / rate(std::min(x + h, x_end)));
    double x1 = std::min(x + h, x_end);
    double c = 0.5 * (x + x1), r = 0.5 * (x1 - x);
    cplx ps = 0;
    for (size_t j = 0; j < g.x.size(); ++j) {
      double th = std::exp(c + r * g.x[j]);
      ps += g.w[j] * th * std::exp(s * std::log(base(th)));
    }
    acc += r * ps;
    x = x1;
  }
  acc += th_min * std::exp(-s * d);
  return 0.5 * acc;
}

BoundaryKernelTable::BoundaryKernelTable(double t, double r_lo, double r_hi) {
  double w = std::min(1.0, 2.0 * kPi / std::max(std::abs(t), 1.0));
  int panels = std::max(1, int(std::ceil((r_hi - r_lo) / w)));
  table_ = ChebTable(r_lo, r_hi, panels, 16);
  const auto& pts = table_.sample_points();
  std::vector<cplx> vals(pts.size());
  parallel_for(pts.size(), [&](size_t i) { vals[i] = boundary_pairing_kernel(pts[i], t); });
  table_.build(vals);
  const int checks = 8;
  std::vector<double> errs(checks);
  parallel_for(checks, [&](size_t i) {
    double r = r_lo + (r_hi - r_lo) * (i + 0.37) / checks;
    errs[i] = std::abs(table_(r).real() - boundary_pairing_kernel(r, t, kPi / 4).real());
  });
  err_ = *std::max_element(errs.begin(), errs.end());
}

}  // namespace eisenlab
