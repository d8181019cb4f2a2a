#pragma once

#include <complex>

#include "eisenlab/geom.hpp"
#include "eisenlab/quadrature.hpp"

namespace eisenlab {

cplx log_gamma(cplx z);
cplx complex_gamma(cplx z);

double vol_sphere(int n);

// pi^{-n/2} 2^{-s} Gamma(s) / Gamma(s - n/2).
cplx constant_C(cplx s, int n = 1);
inline cplx constant_C(const SpectralParameter& p) { return constant_C(p.s(), p.n); }

// Gamma-product form of the Plancherel density.
double plancherel_alpha(double t, int n = 1);
// |C(n/2+it)|^2 vol(S^n), the second route to the same density.
double plancherel_alpha_via_C(double t, int n = 1);

cplx constant_M(double t, int n = 1);
cplx constant_c0(double sigma, int n = 1);
// The expression as printed; see README for how it relates to the trace kernel.
cplx constant_L(double t, int n = 1);
cplx constant_H0(int n = 1);
// Leading geodesic coefficient consistent with spectral_kernel (n = 1).
double geodesic_coefficient(double t);

inline double sigma_of(double r) { return 1.0 / std::cosh(r); }

struct KernelEvaluation {
  double sigma;
  double t;
  cplx value;
  double quadrature_error;
};

// F_t(sigma) = M(t) sigma^{n/2+it} int_0^1 (u(1-u))^{it-1/2} (sigma(1-2u)+1)^{-n/2-it} du.
KernelEvaluation kernel_F(double sigma, double t, double tol, int n = 1);

// Real radial kernel -t Im(2^{2it} F_t(sigma(d))) / |C(1/2+it)|^2; tends to vol(S^1) as d -> 0.
double spectral_kernel_from_F(cplx F, double t, double d);

// Piecewise Chebyshev table of the smooth envelope F_t(sigma(r)) e^{itr} on [r_lo, r_hi].
class SpectralKernelTable {
 public:
  SpectralKernelTable() = default;
  SpectralKernelTable(double t, double r_lo, double r_hi, double tol);

  cplx F(double r) const;
  double kernel(double d) const;
  // The expression -4t Im F_t / |C|^2 taken literally.
  double kernel_literal(double d) const;
  double t() const { return t_; }
  double lo() const { return table_.lo(); }
  double hi() const { return table_.hi(); }
  double build_error() const { return err_; }

 private:
  double t_ = 0, inv_c2_ = 0, err_ = 0;
  cplx twist_;
  ChebTable table_;
};

// K(d) = (1/4) int_0^{2pi} (cosh d - sinh d cos th)^{-1/2+it} dth, the pairing over S^1 of
// E_0(1/2+it; m, .) with the conjugate of E_0(1/2+it; m', .) at distance d.
// `step` is the phase advance per Gauss-Legendre panel in the log(th) variable.
cplx boundary_pairing_kernel(double d, double t, double step = kPi / 2);

// Chebyshev table of Re K on [r_lo, r_hi], panels of width 2pi/t.
class BoundaryKernelTable {
 public:
  BoundaryKernelTable() = default;
  BoundaryKernelTable(double t, double r_lo, double r_hi);

  double operator()(double d) const { return table_(d).real(); }
  double lo() const { return table_.lo(); }
  double hi() const { return table_.hi(); }
  // Spot check of table against direct evaluation at a finer step.
  double build_error() const { return err_; }

 private:
  double err_ = 0;
  ChebTable table_;
};

}  // namespace eisenlab
