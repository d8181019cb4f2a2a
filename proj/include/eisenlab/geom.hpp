#pragma once

#include <complex>

namespace eisenlab {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Point of the open unit disk.
class DiskPoint {
 public:
  DiskPoint() = default;
  explicit DiskPoint(cplx z);
  // Skips the |z| check; for hot loops where z is known to be interior.
  static DiskPoint unchecked(cplx z);

  cplx z() const { return z_; }
  double abs2() const { return std::norm(z_); }

 private:
  cplx z_{0.0, 0.0};
};

// Point of S^1 stored by angle in [0, 2pi).
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double theta);
  static BoundaryPoint from_complex(cplx w);

  double theta() const { return theta_; }
  cplx z() const { return std::polar(1.0, theta_); }

 private:
  double theta_ = 0.0;
};

// z -> (a z + b) / (conj(b) z + conj(a)),  |a|^2 - |b|^2 = 1.
struct DiskIsometry {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  static DiskIsometry identity() { return {}; }
  static DiskIsometry rotation(double alpha);
  // Hyperbolic translation along the diameter through e^{i theta}, moving o by distance d.
  static DiskIsometry translation(double d, double theta);

  double det() const { return std::norm(a) - std::norm(b); }
  DiskIsometry inverse() const { return {std::conj(a), -b}; }
  DiskIsometry normalized() const;
  bool is_identity(double tol = 1e-14) const;
};

DiskIsometry operator*(const DiskIsometry& g, const DiskIsometry& h);

struct IsometricCircle {
  cplx center;
  double radius;
};

struct SpectralParameter {
  int n = 1;
  double t = 0.0;
  cplx s() const { return {0.5 * n, t}; }
};

double hyp_distance(DiskPoint m, DiskPoint m2);
// Distance from o, numerically stable for |m| near 1.
double dist_from_origin(DiskPoint m);

DiskPoint apply(const DiskIsometry& g, DiskPoint m);
BoundaryPoint apply_boundary(const DiskIsometry& g, BoundaryPoint xi);
cplx apply_raw(const DiskIsometry& g, cplx z);

double boundary_derivative(const DiskIsometry& g, BoundaryPoint xi);
double log_boundary_derivative(const DiskIsometry& g, cplx xi);

// d(o, g o) and the translation length (0 for elliptic elements).
double displacement(const DiskIsometry& g);
double translation_length(const DiskIsometry& g);
IsometricCircle isometric_circle(const DiskIsometry& g);

double bdf(DiskPoint m);
double bdf_via_distance(DiskPoint m);

// phi_xi(m) = log((1-|m|^2) / (4|m-xi|^2)).
double phase(BoundaryPoint xi, DiskPoint m);
double phase_raw(cplx xi, cplx m);
// Euclidean gradient of phi_xi, packed as x + i y.
cplx phase_gradient(BoundaryPoint xi, DiskPoint m);
cplx phase_gradient_raw(cplx xi, cplx m);
// Norm of a Euclidean covector in the metric 4|dm|^2/(1-|m|^2)^2.
double g_norm(DiskPoint m, cplx covector);

cplx e0(cplx s, DiskPoint m, BoundaryPoint xi);
double e0(double s, DiskPoint m, BoundaryPoint xi);

double busemann(BoundaryPoint xi, DiskPoint m, DiskPoint m2);

double beardon_identity_check(const DiskIsometry& g, BoundaryPoint xi, BoundaryPoint xi2);

// Hyperbolic area element (2/(1-|m|^2))^2.
inline double area_density(cplx m) {
  double q = 2.0 / (1.0 - std::norm(m));
  return q * q;
}

}  // namespace eisenlab
