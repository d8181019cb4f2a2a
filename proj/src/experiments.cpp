#include "eisenlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "eisenlab/error.hpp"
#include "eisenlab/quadrature.hpp"
#include "eisenlab/special.hpp"

namespace eisenlab {

namespace {

double angular_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * kPi);
  return std::min(d, 2 * kPi - d);
}

double bump_at(const TestFunction& a, const GridNode& n) { return a.profile(n.rho / a.radius); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

FunctionalValue poisson_integral(DiskPoint m, double tol) {
  auto trap = [&](int n) {
    double acc = 0;
    for (int k = 0; k < n; ++k) acc += std::exp(phase_raw(std::polar(1.0, 2 * kPi * k / n), m.z()));
    return acc * 2 * kPi / n;
  };
  int n = 64;
  double prev = trap(n);
  for (;;) {
    n *= 2;
    double cur = trap(n);
    if (std::abs(cur - prev) < tol || n >= (1 << 22)) return {cur, std::abs(cur - prev)};
    prev = cur;
  }
}

std::vector<std::pair<double, double>> boundary_gaps(const SchottkyGroup& G) {
  if (G.letters() == 0) return {{0.0, 2 * kPi}};
  std::vector<std::pair<double, double>> arcs;
  for (const auto& c : G.circles()) {
    double a = std::fmod(c.angle, 2 * kPi);
    if (a < 0) a += 2 * kPi;
    arcs.push_back({a, c.half_width});
  }
  std::sort(arcs.begin(), arcs.end());
  std::vector<std::pair<double, double>> gaps;
  for (size_t i = 0; i < arcs.size(); ++i) {
    auto [a, w] = arcs[i];
    auto [b, v] = arcs[(i + 1) % arcs.size()];
    if (i + 1 == arcs.size()) b += 2 * kPi;
    gaps.push_back({a + w, b - v});
  }
  return gaps;
}

// ---- pointwise equidistribution ----

EquidistPoint equidist_point(const SchottkyGroup& G, BoundaryPoint xi, const TestFunction& a, double t,
                             const EquidistOptions& opt) {
  if (!(opt.tol > 0)) throw Error(ErrorKind::InvalidConfiguration, "series tolerance must be positive");
  if (G.letters() > 0) check_support(G, a);
  QuadratureGrid grid = QuadratureGrid::for_function(a, std::abs(t), opt.grid);
  check_budget(grid, t);
  BoundaryOrbit orbit(G, xi);
  int L = 0;
  double wt_half = 0, wt_one = 0;
  if (G.letters() > 0) {
    TailModel th(G, 0.5), t1(G, 1.0);
    std::vector<cplx> pts;
    for (const auto& n : grid.fine()) pts.push_back(n.m);
    for (const auto& n : grid.coarse()) pts.push_back(n.m);
    L = orbit.length_for(th, pts, opt.tol);
    wt_half = orbit.weight_tail(th, L);
    wt_one = orbit.weight_tail(t1, L);
  } else {
    orbit.extend_to(0);
  }
  const cplx* eta = orbit.eta().data();
  const double* lw = orbit.logw().data();
  const std::size_t nw = orbit.size(L);
  const double log4 = std::log(4.0);

  auto r = integrate_n<3>(grid, [&](const GridNode& n) -> Vals<3> {
    double av = bump_at(a, n);
    if (av == 0.0) return {0, 0, 0};
    cplx m = n.m;
    double base = std::log(1.0 - std::norm(m)) - log4;
    double er = 0, ei = 0, diag = 0;
    for (std::size_t i = 0; i < nw; ++i) {
      double psi = base - std::log(std::norm(m - eta[i])) + lw[i];
      double amp = std::exp(0.5 * psi);
      double ph = t * psi;
      er += amp * std::cos(ph);
      ei += amp * std::sin(ph);
      diag += amp * amp;
    }
    double off = opt.offdiagonal ? er * er + ei * ei - diag : 0.0;
    double trunc = 0;
    if (nw > 1 || G.letters() > 0) {
      double em = orbit.emax(m);
      double tau = std::sqrt(em) * wt_half, tau1 = em * wt_one;
      trunc = opt.offdiagonal ? (2.0 * std::hypot(er, ei) + tau) * tau + tau1 : 0.0;
    }
    return {av * off, av * diag, av * trunc};
  });

  EquidistPoint p;
  p.t = t;
  p.signed_value = r.value[0];
  p.D = std::abs(p.signed_value);
  p.diag = r.value[1];
  p.quad_error = r.error(0);
  p.diag_error = r.error(1);
  p.trunc_error = r.value[2];
  p.error = p.quad_error + p.trunc_error;
  p.truncation_length = L;
  p.words = nw;
  p.nodes = grid.fine().size() + grid.coarse().size();
  return p;
}

double upper_slope(const std::vector<double>& t, const std::vector<double>& y) {
  std::size_t n = t.size(), start = n / 3;
  if (n - start < 2) return kNaN;
  std::vector<double> lx, ly;
  for (std::size_t i = start; i < n; ++i) {
    if (!(std::abs(y[i]) > 0) || !(t[i] > 0)) return kNaN;
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return ls_slope(lx, ly);
}

EquidistScan equidist_scan(const SchottkyGroup& G, BoundaryPoint xi, const TestFunction& a,
                           const std::vector<double>& t_grid, const EquidistOptions& opt) {
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorKind::Config, "t grid must be strictly increasing");
  EquidistScan s;
  std::vector<double> ts, ds;
  for (double t : t_grid) {
    s.points.push_back(equidist_point(G, xi, a, t, opt));
    ts.push_back(t);
    ds.push_back(s.points.back().D);
    s.slope_so_far.push_back(upper_slope(ts, ds));
  }
  s.slope = s.slope_so_far.empty() ? kNaN : s.slope_so_far.back();
  return s;
}

// ---- sums over the group of radial kernels ----

std::pair<double, double> kernel_distance_range(const SchottkyGroup& G, const TestFunction& a, int L) {
  double rc = dist_from_origin(a.center) + a.radius;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for_each_word(G, EnumerationPolicy::length(L), [&](const Word& w) {
    if (w.letters.empty()) return;
    lo = std::min(lo, std::max(w.displacement - 2 * rc, translation_length(w.g)));
    hi = std::max(hi, w.displacement + 2 * rc);
  });
  if (hi == 0) return {0.05, 1.0};
  return {std::max(0.05, lo * (1 - 1e-9)), hi * (1 + 1e-9)};
}

KernelSum kernel_orbit_sum(const SchottkyGroup& G, const TestFunction& a, double t_budget,
                           const std::vector<std::function<double(double)>>& kernels,
                           const KernelSumOptions& opt) {
  constexpr int kMaxKernels = 2, kMaxShells = 16;
  const int nk = static_cast<int>(kernels.size());
  if (nk < 1 || nk > kMaxKernels) throw Error(ErrorKind::InvalidConfiguration, "kernel_orbit_sum takes 1 or 2 kernels");
  const int L = opt.word_length;
  if (L < 1 || L > kMaxShells) throw Error(ErrorKind::Config, "word length must lie in [1, 16]");

  std::vector<DiskIsometry> words;
  std::vector<int> shell;
  for_each_word(G, EnumerationPolicy::length(L), [&](const Word& w) {
    if (w.letters.empty()) return;
    words.push_back(w.g);
    shell.push_back(static_cast<int>(w.letters.size()));
  });

  QuadratureGrid grid = QuadratureGrid::for_function(a, t_budget, opt.grid);
  std::vector<double> k0(nk);
  for (int i = 0; i < nk; ++i) k0[i] = kernels[i](0.0);

  auto r = integrate_n<kMaxKernels + kMaxShells + 1>(grid, [&](const GridNode& n) {
    Vals<kMaxKernels + kMaxShells + 1> v{};
    double av = bump_at(a, n);
    if (av == 0.0) return v;
    cplx m = n.m;
    double om = 1.0 - std::norm(m);
    for (int i = 0; i < nk; ++i) v[i] = av * k0[i];
    for (std::size_t w = 0; w < words.size(); ++w) {
      const DiskIsometry& g = words[w];
      cplx den = std::conj(g.b) * m + std::conj(g.a);
      cplx bm = (g.a * m + g.b) / den;
      // 1 - |beta m|^2 = (1 - |m|^2) / |den|^2 avoids cancellation far out.
      double s2 = std::norm(m - bm) * std::norm(den) / (om * om);
      double d = 2.0 * std::asinh(std::sqrt(s2));
      double k = kernels[0](d);
      v[0] += av * k;
      v[kMaxKernels + shell[w]] += av * std::abs(k);
      if (nk > 1) v[1] += av * kernels[1](d);
    }
    return v;
  });

  KernelSum out;
  for (int i = 0; i < nk; ++i) out.values.push_back(r.value[i]);
  out.quad_error = r.error(0);
  for (int l = 1; l <= L; ++l) out.shell_abs.push_back(r.value[kMaxKernels + l]);
  out.words = words.size();
  double aL = out.shell_abs.back();
  double aP = L >= 2 ? out.shell_abs[L - 2] : 0.0;
  if (aL == 0) {
    out.tail_estimate = 0;
  } else if (aP > 0 && aL < aP) {
    double rho = aL / aP;
    out.tail_estimate = aL * rho / (1 - rho);
  } else {
    out.tail_estimate = std::numeric_limits<double>::infinity();
  }
  return out;
}

// ---- boundary-averaged equidistribution ----

AveragedPoint averaged_equidist(const SchottkyGroup& G, const TestFunction& a, double t, const KernelSumOptions& opt) {
  AveragedPoint p;
  p.t = t;
  QuadratureGrid grid = QuadratureGrid::for_function(a, std::abs(t), opt.grid);
  Integral area = integrate(grid, a);
  p.reference = poisson_constant() * area.value;
  if (G.letters() == 0) {
    p.value = boundary_pairing_kernel(0.0, t).real() * area.value;
    p.deviation = std::abs(p.value - p.reference);
    p.error = poisson_constant() * area.error;
    return p;
  }
  check_support(G, a);
  auto [lo, hi] = kernel_distance_range(G, a, opt.word_length);
  BoundaryKernelTable K(t, lo, hi);
  double k_id = boundary_pairing_kernel(0.0, t).real();
  auto kern = [&](double d) {
    if (d == 0.0) return k_id;
    if (d < K.lo() || d > K.hi()) throw Error(ErrorKind::NumericalDegeneracy, "distance outside kernel table");
    return K(d);
  };
  KernelSum s = kernel_orbit_sum(G, a, std::abs(t), {kern}, opt);
  p.value = s.values[0];
  p.deviation = std::abs(p.value - p.reference);
  p.table_error = K.build_error() * area.value * s.words;
  p.error = s.quad_error + s.tail_estimate + p.table_error;
  p.word_length = opt.word_length;
  return p;
}

FunctionalValue averaged_direct(const SchottkyGroup& G, const TestFunction& a, double t, int xi_nodes,
                                const EquidistOptions& opt) {
  if (xi_nodes < 4) throw Error(ErrorKind::Config, "need at least 4 boundary nodes");
  auto energy = [&](double th, double& err) {
    EquidistPoint p = equidist_point(G, BoundaryPoint(th), a, t, opt);
    err = p.error + p.diag_error;
    return p.signed_value + p.diag;
  };
  FunctionalValue out;
  if (G.letters() == 0) {
    int n = xi_nodes + xi_nodes % 2;
    double full = 0, half = 0, err = 0;
    for (int k = 0; k < n; ++k) {
      double e;
      double v = energy(2 * kPi * k / n, e);
      full += v * 2 * kPi / n;
      err += e * 2 * kPi / n;
      if (k % 2 == 0) half += v * 4 * kPi / n;
    }
    return {full, err + std::abs(full - half)};
  }
  const GaussRule& hi = gauss_legendre(xi_nodes);
  const GaussRule& lo = gauss_legendre(xi_nodes / 2);
  double qh = 0, ql = 0, err = 0;
  for (auto [g0, g1] : boundary_gaps(G)) {
    double c = 0.5 * (g0 + g1), r = 0.5 * (g1 - g0);
    for (size_t j = 0; j < hi.x.size(); ++j) {
      double e;
      qh += r * hi.w[j] * energy(c + r * hi.x[j], e);
      err += r * hi.w[j] * e;
    }
    for (size_t j = 0; j < lo.x.size(); ++j) {
      double e;
      ql += r * lo.w[j] * energy(c + r * lo.x[j], e);
    }
  }
  out.value = qh;
  out.error = err + std::abs(qh - ql);
  return out;
}

// ---- phase-space measures ----

FunctionalValue liouville(const SchottkyGroup& G, const Symbol& a, double tol) {
  if (G.letters() > 0) check_support(G, a.support);
  QuadratureGrid grid = QuadratureGrid::for_function(a.support, 0.0);
  auto inner = [&](cplx m, int n) {
    double acc = 0;
    for (int k = 0; k < n; ++k) {
      cplx xi = std::polar(1.0, 2 * kPi * k / n);
      acc += a.fn(DiskPoint::unchecked(m), std::arg(phase_gradient_raw(xi, m))) * std::exp(phase_raw(xi, m));
    }
    return acc * 2 * kPi / n;
  };
  auto r = integrate_n<2>(grid, [&](const GridNode& nd) -> Vals<2> {
    int n = 64;
    double prev = inner(nd.m, n);
    for (;;) {
      n *= 2;
      double cur = inner(nd.m, n);
      if (std::abs(cur - prev) < tol || n >= (1 << 16)) return {cur, std::abs(cur - prev)};
      prev = cur;
    }
  });
  return {r.value[0], r.error(0) + r.value[1]};
}

FunctionalValue boundary_average_mu(const SchottkyGroup& G, const Symbol& a, double tol, int order) {
  if (order < 4) throw Error(ErrorKind::Config, "boundary quadrature order must be at least 4");
  if (G.letters() == 0) {
    int n = 2 * order;
    double full = 0, half = 0, err = 0;
    for (int k = 0; k < n; ++k) {
      FunctionalValue v = mu_xi(G, a, BoundaryPoint(2 * kPi * k / n), tol);
      full += v.value * 2 * kPi / n;
      err += v.error * 2 * kPi / n;
      if (k % 2 == 0) half += v.value * 4 * kPi / n;
    }
    return {full, err + std::abs(full - half)};
  }
  const GaussRule& hi = gauss_legendre(order);
  const GaussRule& lo = gauss_legendre(order - 4);
  double qh = 0, ql = 0, err = 0;
  for (auto [g0, g1] : boundary_gaps(G)) {
    double c = 0.5 * (g0 + g1), r = 0.5 * (g1 - g0);
    for (size_t j = 0; j < hi.x.size(); ++j) {
      FunctionalValue v = mu_xi(G, a, BoundaryPoint(c + r * hi.x[j]), tol);
      qh += r * hi.w[j] * v.value;
      err += r * hi.w[j] * v.error;
    }
    for (size_t j = 0; j < lo.x.size(); ++j)
      ql += r * lo.w[j] * mu_xi(G, a, BoundaryPoint(c + r * lo.x[j]), tol).value;
  }
  return {qh, err + std::abs(qh - ql)};
}

// ---- trace comparison ----

FunctionalValue axis_integral(const SchottkyGroup& G, const TestFunction& a, const DiskIsometry& g,
                              double primitive_length) {
  double ra = g.a.real();
  double sq = std::sqrt(std::max(0.0, ra * ra - 1.0));
  if (sq == 0.0) throw Error(ErrorKind::NumericalDegeneracy, "axis of a non-hyperbolic element");
  cplx zp = cplx(sq, g.a.imag()) / std::conj(g.b);
  cplx zm = cplx(-sq, g.a.imag()) / std::conj(g.b);
  double half = 0.5 * angular_gap(std::arg(zp), std::arg(zm));
  DiskIsometry M;
  if (std::abs(zp + zm) < 1e-12) {
    M = DiskIsometry::rotation(std::arg(zp));
  } else {
    double alpha = std::arg(zp + zm);
    double r0 = (1.0 - std::sin(half)) / std::cos(half);
    M = DiskIsometry::translation(2.0 * std::atanh(r0), alpha) * DiskIsometry::rotation(alpha + 0.5 * kPi);
  }
  auto sample = [&](double s) {
    DiskPoint p = apply(M, DiskPoint(std::tanh(0.5 * s)));
    Reduction red = reduce_to_domain(G, p);
    return a(red.point);
  };
  double l0 = primitive_length;
  int n = std::max(64, int(std::ceil(l0 / (a.radius / 24.0))));
  n += n % 2;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = sample(-0.5 * l0 + l0 * i / n);
  for (;;) {
    double full = 0, half_sum = 0;
    for (int i = 0; i < n; ++i) {
      full += vals[i];
      if (i % 2 == 0) half_sum += vals[i];
    }
    full *= l0 / n;
    half_sum *= 2 * l0 / n;
    double err = std::abs(full - half_sum);
    if (err <= 1e-11 * std::max(1.0, std::abs(full)) || n >= (1 << 20)) return {full, err};
    std::vector<double> next(2 * n);
    for (int i = 0; i < n; ++i) {
      next[2 * i] = vals[i];
      next[2 * i + 1] = sample(-0.5 * l0 + l0 * (i + 0.5) / n);
    }
    vals.swap(next);
    n *= 2;
  }
}

TraceRecord trace_compare(const SchottkyGroup& G, const TestFunction& a, double t, const TraceOptions& opt) {
  if (!(t > 0)) throw Error(ErrorKind::Config, "trace comparison needs t > 0");
  if (!(opt.tol > 0) || !(opt.kernel_tol > 0)) throw Error(ErrorKind::Config, "tolerances must be positive");
  check_support(G, a);
  TraceRecord rec;
  rec.t = t;
  int L = opt.word_length;
  if (L <= 0) L = std::max(1, int(std::ceil(opt.geodesic_cutoff / G.min_wall_separation())));
  rec.word_length = L;

  auto [lo, hi] = kernel_distance_range(G, a, L);
  SpectralKernelTable table(t, lo, hi, opt.kernel_tol);
  double vol = vol_sphere(1);
  auto checked = [&](double d) {
    if (d < table.lo() || d > table.hi()) throw Error(ErrorKind::NumericalDegeneracy, "distance outside kernel table");
  };
  auto k = [&](double d) {
    if (d == 0.0) return vol;
    checked(d);
    return table.kernel(d);
  };
  auto k_lit = [&](double d) {
    if (d == 0.0) return vol;
    checked(d);
    return table.kernel_literal(d);
  };
  KernelSumOptions ko;
  ko.word_length = L;
  ko.grid = opt.grid;
  KernelSum s = kernel_orbit_sum(G, a, t, {k, k_lit}, ko);
  QuadratureGrid grid = QuadratureGrid::for_function(a, t, opt.grid);
  Integral area = integrate(grid, a);

  rec.lhs = s.values[0];
  rec.lhs_literal = s.values[1];
  rec.rhs_identity = vol * area.value;
  rec.oscillatory = rec.lhs - rec.rhs_identity;
  double inv_c2 = 1.0 / std::norm(constant_C(cplx(0.5, t), 1));
  rec.kernel_error = t * table.build_error() * inv_c2 * area.value * s.words;
  rec.lhs_tail = s.tail_estimate;
  rec.lhs_error = s.quad_error + vol * area.error + rec.lhs_tail + rec.kernel_error;

  double Ltrue = geodesic_coefficient(t);
  cplx Lprinted = constant_L(t, 1);
  cplx H0 = constant_H0(1);
  auto classes = enumerate_geodesics(G, opt.geodesic_cutoff);
  rec.classes = classes.size();
  double frac = 0;
  std::vector<double> window(2, 0.0);
  for (const auto& c : classes) {
    double l0 = c.length / c.power;
    FunctionalValue I = axis_integral(G, a, c.g, l0);
    cplx f = std::exp(-cplx(0.5, t) * c.length) * H0 / (1.0 - std::exp(-c.length));
    rec.rhs_geodesic_k0 += 2.0 * (Ltrue * f * I.value).real();
    rec.rhs_geodesic_printed_L += 2.0 * (Lprinted * f * I.value).real();
    rec.geodesic_error += 2.0 * std::abs(Ltrue * f) * I.error;
    if (I.value > 0) {
      ++rec.classes_hit;
      frac = std::max(frac, I.value / l0);
    }
    int wi = int((opt.geodesic_cutoff - c.length) / 2.0);
    if (wi < 2) window[wi] += l0 * std::exp(-0.5 * c.length) / (1.0 - std::exp(-c.length));
  }
  // Shell-ratio extrapolation over 2-unit length windows; frac bounds int_gamma a / l0 empirically.
  double amp = 2.0 * std::abs(Ltrue * H0) * frac;
  if (window[0] > 0 && window[1] > window[0]) {
    double rho = window[0] / window[1];
    rec.geodesic_tail = amp * window[0] * rho / (1 - rho);
  } else if (frac > 0) {
    rec.geodesic_tail = std::numeric_limits<double>::infinity();
  }
  rec.residual = std::abs(rec.lhs - rec.rhs_identity - rec.rhs_geodesic_k0);

  if (rec.lhs_tail > opt.tol || rec.geodesic_tail > opt.tol) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "cutoff insufficient at t = %g: word tail %.3g, geodesic tail %.3g, tol %.3g", t,
                  rec.lhs_tail, rec.geodesic_tail, opt.tol);
    throw Error(ErrorKind::CutoffInsufficient, buf);
  }
  return rec;
}

}  // namespace eisenlab
