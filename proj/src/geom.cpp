#include "eisenlab/geom.hpp"

#include <cmath>

#include "eisenlab/error.hpp"

namespace eisenlab {

DiskPoint::DiskPoint(cplx z) : z_(z) {
  if (!(std::abs(z) < 1.0 - 1e-14))
    throw Error(ErrorKind::InvalidConfiguration, "disk point outside the open unit disk");
}

DiskPoint DiskPoint::unchecked(cplx z) {
  DiskPoint p;
  p.z_ = z;
  return p;
}

BoundaryPoint::BoundaryPoint(double theta) {
  double t = std::fmod(theta, 2 * kPi);
  if (t < 0) t += 2 * kPi;
  if (t >= 2 * kPi) t = 0.0;
  theta_ = t;
}

BoundaryPoint BoundaryPoint::from_complex(cplx w) { return BoundaryPoint(std::arg(w)); }

DiskIsometry DiskIsometry::rotation(double alpha) { return {std::polar(1.0, alpha / 2), 0.0}; }

DiskIsometry DiskIsometry::translation(double d, double theta) {
  return {cplx(std::cosh(d / 2), 0.0), std::polar(std::sinh(d / 2), theta)};
}

DiskIsometry DiskIsometry::normalized() const {
  // For large entries |a|^2 - |b|^2 is dominated by cancellation and carries no information.
  if (std::norm(a) > 1e4) return *this;
  // In double the determinant carries an error of eps |a|^2, which the division would inject.
  using lc = std::complex<long double>;
  long double d = std::norm(lc(a)) - std::norm(lc(b));
  double s = static_cast<double>(std::sqrt(d));
  return {a / s, b / s};
}

bool DiskIsometry::is_identity(double tol) const {
  return std::abs(b) < tol && std::abs(std::abs(a) - 1.0) < tol && std::abs(a * a - 1.0) < tol;
}

DiskIsometry operator*(const DiskIsometry& g, const DiskIsometry& h) {
  DiskIsometry r{g.a * h.a + g.b * std::conj(h.b), g.a * h.b + g.b * std::conj(h.a)};
  return r.normalized();
}

namespace {

double one_minus_abs2(cplx z) {
  double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

}  // namespace

double hyp_distance(DiskPoint m, DiskPoint m2) {
  double num = std::abs(m.z() - m2.z());
  double den = std::sqrt(one_minus_abs2(m.z()) * one_minus_abs2(m2.z()));
  return 2.0 * std::asinh(num / den);
}

double dist_from_origin(DiskPoint m) { return 2.0 * std::atanh(std::abs(m.z())); }

cplx apply_raw(const DiskIsometry& g, cplx z) {
  cplx den = std::conj(g.b) * z + std::conj(g.a);
  if (std::abs(den) < 1e-14)
    throw Error(ErrorKind::NumericalDegeneracy, "Mobius denominator vanishes");
  return (g.a * z + g.b) / den;
}

DiskPoint apply(const DiskIsometry& g, DiskPoint m) {
  cplx w = apply_raw(g, m.z());
  double r = std::abs(w);
  // Long words can push rounding past the circle.
  if (r >= 1.0) w *= (1.0 - 1e-16) / r;
  return DiskPoint::unchecked(w);
}

BoundaryPoint apply_boundary(const DiskIsometry& g, BoundaryPoint xi) {
  return BoundaryPoint::from_complex(apply_raw(g, xi.z()));
}

double boundary_derivative(const DiskIsometry& g, BoundaryPoint xi) {
  cplx den = std::conj(g.b) * xi.z() + std::conj(g.a);
  if (std::abs(den) < 1e-14)
    throw Error(ErrorKind::NumericalDegeneracy, "Mobius denominator vanishes");
  return 1.0 / std::norm(den);
}

double log_boundary_derivative(const DiskIsometry& g, cplx xi) {
  return -std::log(std::norm(std::conj(g.b) * xi + std::conj(g.a)));
}

double displacement(const DiskIsometry& g) { return 2.0 * std::asinh(std::abs(g.b)); }

double translation_length(const DiskIsometry& g) {
  double h = std::abs(g.a.real());
  return h > 1.0 ? 2.0 * std::acosh(h) : 0.0;
}

IsometricCircle isometric_circle(const DiskIsometry& g) {
  double nb = std::abs(g.b);
  if (nb == 0.0) throw Error(ErrorKind::NumericalDegeneracy, "isometric circle of a rotation");
  return {-std::conj(g.a) / std::conj(g.b), 1.0 / nb};
}

double bdf(DiskPoint m) {
  double r = std::abs(m.z());
  return 2.0 * (1.0 - r) / (1.0 + r);
}

double bdf_via_distance(DiskPoint m) { return 2.0 * std::exp(-dist_from_origin(m)); }

double phase_raw(cplx xi, cplx m) {
  return std::log(one_minus_abs2(m)) - std::log(4.0) - std::log(std::norm(m - xi));
}

double phase(BoundaryPoint xi, DiskPoint m) { return phase_raw(xi.z(), m.z()); }

cplx phase_gradient_raw(cplx xi, cplx m) {
  cplx d = m - xi;
  return -2.0 * m / one_minus_abs2(m) - 2.0 * d / std::norm(d);
}

cplx phase_gradient(BoundaryPoint xi, DiskPoint m) { return phase_gradient_raw(xi.z(), m.z()); }

double g_norm(DiskPoint m, cplx covector) { return 0.5 * one_minus_abs2(m.z()) * std::abs(covector); }

cplx e0(cplx s, DiskPoint m, BoundaryPoint xi) { return std::exp(s * phase(xi, m)); }

double e0(double s, DiskPoint m, BoundaryPoint xi) { return std::exp(s * phase(xi, m)); }

double busemann(BoundaryPoint xi, DiskPoint m, DiskPoint m2) { return phase(xi, m) - phase(xi, m2); }

double beardon_identity_check(const DiskIsometry& g, BoundaryPoint xi, BoundaryPoint xi2) {
  cplx x = xi.z(), y = xi2.z();
  // The left side cancels badly for large displacement, so it is evaluated in extended precision.
  using lc = std::complex<long double>;
  lc a(g.a), b(g.b), lx(x), ly(y);
  auto act = [&](lc z) { return (a * z + b) / (std::conj(b) * z + std::conj(a)); };
  // Rounding leaves det != 1 by about eps |a|^2; the right side assumes det = 1.
  long double det = std::norm(a) - std::norm(b);
  double lhs = static_cast<double>(std::abs(act(lx) - act(ly)) / det);
  IsometricCircle c = isometric_circle(g);
  double sh = std::abs(g.b);
  double rhs = std::abs(x - y) / (sh * sh * std::abs(x - c.center) * std::abs(y - c.center));
  return std::abs(lhs - rhs);
}

}  // namespace eisenlab
