#include "eisenlab/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "eisenlab/error.hpp"

namespace eisenlab {

namespace {

double angular_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * kPi);
  return std::min(d, 2 * kPi - d);
}

// Point of the arc [c - w, c + w] nearest to the direction of p.
cplx nearest_on_arc(double c, double w, cplx p) {
  if (std::abs(p) == 0.0) return std::polar(1.0, c);
  double th = std::arg(p);
  if (angular_gap(th, c) <= w) return std::polar(1.0, th);
  double lo = c - w, hi = c + w;
  return angular_gap(th, lo) < angular_gap(th, hi) ? std::polar(1.0, lo) : std::polar(1.0, hi);
}

// max over eta in arc j of |Du(eta)|.
double max_derivative_on_arc(const DiskIsometry& u, const PairingCircle& arc) {
  if (std::abs(u.b) == 0.0) return 1.0;
  cplx pole = -std::conj(u.a) / std::conj(u.b);
  cplx e = nearest_on_arc(arc.angle, arc.half_width, pole);
  return 1.0 / std::norm(std::conj(u.b) * e + std::conj(u.a));
}

}  // namespace

void validate_xi(const SchottkyGroup& G, BoundaryPoint xi) {
  const auto& C = G.circles();
  auto locate = [&](double th, double margin) {
    for (int j = 0; j < G.letters(); ++j)
      if (angular_gap(th, C[j].angle) - C[j].half_width <= margin) return j;
    return -1;
  };
  int j = locate(xi.theta(), 1e-6);
  if (j < 0) return;
  if (locate(xi.theta(), -1e-6) < 0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "xi = %.17g is within 1e-6 of the endpoint of pairing arc %d", xi.theta(), j);
    throw Error(ErrorKind::XiOutsideDomain, buf);
  }
  cplx cur = xi.z();
  double log_d = 0;
  for (int step = 0; step < 400; ++step) {
    j = locate(std::arg(cur), 0.0);
    if (j < 0) break;
    double width = 2.0 * C[j].half_width * std::exp(-log_d);
    if (width < 1e-9) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "xi = %.17g lies within 1e-9 of the limit set", xi.theta());
      throw Error(ErrorKind::XiInLimitSet, buf);
    }
    log_d += log_boundary_derivative(G.letter(j), cur);
    cur = apply_raw(G.letter(j), cur);
    cur /= std::abs(cur);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "xi = %.17g lies inside a pairing arc; use a point of the domain boundary", xi.theta());
  throw Error(ErrorKind::XiOutsideDomain, buf);
}

TailModel::TailModel(const SchottkyGroup& G, double sigma) : sigma_(sigma) {
  int nl = G.letters();
  coef_.assign(nl, 0.0);
  if (nl == 0) return;
  int max_block = 1;
  for (double count = nl; max_block < 6 && count * (nl - 1) <= 20000; count *= nl - 1) ++max_block;

  // q[r-1][j]: sum over reduced u of length r whose first-applied letter is not j.
  std::vector<std::vector<double>> q(max_block, std::vector<double>(nl, 0.0));
  struct Frame {
    DiskIsometry u;
    int first, left, len;
  };
  std::vector<Frame> stack;
  for (int y = 0; y < nl; ++y) stack.push_back({G.letter(y), y, y, 1});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (int j = 0; j < nl; ++j)
      if (f.first != j) q[f.len - 1][j] += std::pow(max_derivative_on_arc(f.u, G.circles()[j]), sigma);
    if (f.len == max_block) continue;
    for (int y = 0; y < nl; ++y)
      if (y != inverse_letter(f.left)) stack.push_back({G.letter(y) * f.u, f.first, y, f.len + 1});
  }

  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= max_block; ++p) {
    double qp = *std::max_element(q[p - 1].begin(), q[p - 1].end());
    if (!(qp < 1.0)) continue;
    std::vector<double> c(nl, 0.0);
    for (int j = 0; j < nl; ++j) {
      for (int r = 1; r <= p; ++r) c[j] += q[r - 1][j];
      c[j] /= 1.0 - qp;
    }
    double worst = *std::max_element(c.begin(), c.end());
    if (worst < best) {
      best = worst;
      coef_ = c;
      block_ = p;
    }
  }
  if (block_ == 0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "no geometric tail bound at exponent %.6g: shell ratio is not below 1", sigma);
    throw Error(ErrorKind::NonConvergence, buf);
  }
}

BoundaryOrbit::BoundaryOrbit(const SchottkyGroup& G, BoundaryPoint xi) : G_(&G), xi_(xi) {
  validate_xi(G, xi);
  eta_.push_back(xi.z());
  logw_.push_back(0.0);
  last_.push_back(-1);
  level_end_ = {1};
}

void BoundaryOrbit::extend_to(int L, std::size_t cap) {
  int nl = G_->letters();
  while (depth() < L) {
    if (nl == 0) {
      level_end_.push_back(level_end_.back());
      continue;
    }
    std::size_t lo = depth() == 0 ? 0 : level_end_[depth() - 1], hi = level_end_.back();
    if (hi + (hi - lo) * (nl - 1) + nl > cap)
      throw Error(ErrorKind::ResourceLimit, "boundary orbit exceeded the word cap");
    for (std::size_t i = lo; i < hi; ++i)
      for (int y = 0; y < nl; ++y) {
        if (last_[i] >= 0 && y == inverse_letter(last_[i])) continue;
        const DiskIsometry& g = G_->letter(y);
        eta_.push_back(apply_raw(g, eta_[i]));
        eta_.back() /= std::abs(eta_.back());
        logw_.push_back(logw_[i] + log_boundary_derivative(g, eta_[i]));
        last_.push_back(static_cast<std::int8_t>(y));
      }
    level_end_.push_back(eta_.size());
  }
}

double BoundaryOrbit::emax(cplx m) const {
  double best = 0;
  double om = 1.0 - std::norm(m);
  for (const auto& c : G_->circles()) {
    cplx e = nearest_on_arc(c.angle, c.half_width, m);
    best = std::max(best, om / (4.0 * std::norm(m - e)));
  }
  return best;
}

double BoundaryOrbit::weight_tail(const TailModel& tm, int L) const {
  if (G_->letters() == 0) return 0.0;
  if (L < 1) throw Error(ErrorKind::InvalidConfiguration, "tail bound needs truncation length >= 1");
  std::vector<double> s(G_->letters(), 0.0);
  for (std::size_t i = level_end_[L - 1]; i < level_end_[L]; ++i)
    s[inverse_letter(last_[i])] += std::exp(tm.sigma() * logw_[i]);
  double tot = 0;
  for (int j = 0; j < G_->letters(); ++j) tot += tm.coef()[j] * s[j];
  return tot;
}

double BoundaryOrbit::tail_bound(const TailModel& tm, cplx m, int L) const {
  if (G_->letters() == 0) return 0.0;
  return std::pow(emax(m), tm.sigma()) * weight_tail(tm, L);
}

int BoundaryOrbit::length_for(const TailModel& tm, const std::vector<cplx>& points, double tol, std::size_t cap) {
  if (G_->letters() == 0) {
    extend_to(0, cap);
    return 0;
  }
  double em = 0;
  for (cplx m : points) em = std::max(em, std::pow(emax(m), tm.sigma()));
  for (int L = 1;; ++L) {
    try {
      extend_to(L, cap);
    } catch (const Error&) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "word cap reached at length %d before the tail bound fell below %.3g", L, tol);
      throw Error(ErrorKind::ToleranceNotMet, buf);
    }
    if (em * weight_tail(tm, L) < tol) return L;
  }
}

cplx orbit_sum(const BoundaryOrbit& orbit, cplx s, cplx m, int L) {
  cplx acc = 0;
  const auto& eta = orbit.eta();
  const auto& lw = orbit.logw();
  double base = std::log(1.0 - std::norm(m)) - std::log(4.0);
  for (std::size_t i = 0; i < orbit.size(L); ++i) acc += std::exp(s * (base - std::log(std::norm(m - eta[i])) + lw[i]));
  return acc;
}

namespace {

SeriesEvaluation evaluate(const SchottkyGroup& G, cplx s, DiskPoint m, BoundaryPoint xi, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidConfiguration, "tolerance must be positive");
  BoundaryOrbit orbit(G, xi);
  SeriesEvaluation r;
  if (G.letters() == 0) {
    orbit.extend_to(0);
    r.value = orbit_sum(orbit, s, m.z(), 0);
    r.terms_used = 1;
    return r;
  }
  TailModel tm(G, s.real());
  r.truncation_length = orbit.length_for(tm, {m.z()}, tol);
  r.tail_bound = orbit.tail_bound(tm, m.z(), r.truncation_length);
  r.value = orbit_sum(orbit, s, m.z(), r.truncation_length);
  r.terms_used = orbit.size(r.truncation_length);
  return r;
}

}  // namespace

SeriesEvaluation eisenstein(const SchottkyGroup& G, const SpectralParameter& s, DiskPoint m, BoundaryPoint xi,
                            double tol) {
  if (s.n != 1) throw Error(ErrorKind::InvalidConfiguration, "group-level code needs n = 1");
  return evaluate(G, s.s(), m, xi, tol);
}

SeriesEvaluation eisenstein_real(const SchottkyGroup& G, double s, DiskPoint m, BoundaryPoint xi, double tol) {
  return evaluate(G, cplx(s, 0.0), m, xi, tol);
}

double harmonic_density(const SchottkyGroup& G, DiskPoint m, BoundaryPoint xi, double tol) {
  double v = eisenstein_real(G, 1.0, m, xi, tol).value.real();
  if (!(v > 0)) throw Error(ErrorKind::NumericalDegeneracy, "harmonic density is not positive");
  return v;
}

FunctionalValue mu_xi(const SchottkyGroup& G, const Symbol& a, BoundaryPoint xi, double tol) {
  check_support(G, a.support);
  QuadratureGrid grid = QuadratureGrid::for_function(a.support, 0.0);
  BoundaryOrbit orbit(G, xi);
  TailModel tm;
  int L = 0;
  double trunc = 0;
  if (G.letters() > 0) {
    tm = TailModel(G, 1.0);
    std::vector<cplx> pts;
    for (const auto& n : grid.fine()) pts.push_back(n.m);
    L = orbit.length_for(tm, pts, tol);
    double worst = 0;
    for (cplx m : pts) worst = std::max(worst, orbit.tail_bound(tm, m, L));
    double r = a.support.radius;
    trunc = a.sup * worst * 4.0 * kPi * std::sinh(0.5 * r) * std::sinh(0.5 * r);
  } else {
    orbit.extend_to(0);
  }
  const auto& eta = orbit.eta();
  const auto& lw = orbit.logw();
  std::size_t nw = orbit.size(L);
  auto r = integrate(grid, [&](DiskPoint m) {
    double base = std::log(1.0 - m.abs2()) - std::log(4.0);
    double acc = 0;
    for (std::size_t i = 0; i < nw; ++i) {
      cplx g = phase_gradient_raw(eta[i], m.z());
      acc += a.fn(m, std::arg(g)) * std::exp(base - std::log(std::norm(m.z() - eta[i])) + lw[i]);
    }
    return acc;
  });
  return {r.value, r.error + trunc};
}

}  // namespace eisenlab
