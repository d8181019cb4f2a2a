#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "eisenlab/eisenstein.hpp"
#include "eisenlab/grid.hpp"
#include "eisenlab/schottky.hpp"

namespace eisenlab {

// Observed value of int_{S^1} E_0(1; m, xi) dxi (independent of m).
inline double poisson_constant() { return 0.5 * kPi; }

// Trapezoid rule in xi, doubled until two levels agree to tol.
FunctionalValue poisson_integral(DiskPoint m, double tol = 1e-13);

// Complementary arcs of S^1 between pairing arcs, as [lo, hi] angles with lo < hi.
std::vector<std::pair<double, double>> boundary_gaps(const SchottkyGroup& G);

// ---- pointwise equidistribution ----

struct EquidistOptions {
  double tol = 1e-6;  // series truncation
  GridOptions grid;
  bool offdiagonal = true;  // false keeps only |term|^2, so D vanishes identically
};

struct EquidistPoint {
  double t = 0;
  double D = 0;         // |signed|
  double signed_value = 0;  // int a (|E(1/2+it)|^2 - E(1))
  double diag = 0;          // int a E(1)
  double diag_error = 0;    // quadrature error of diag
  double error = 0;
  double quad_error = 0;
  double trunc_error = 0;
  int truncation_length = 0;
  std::size_t words = 0;
  std::size_t nodes = 0;
};

EquidistPoint equidist_point(const SchottkyGroup& G, BoundaryPoint xi, const TestFunction& a, double t,
                             const EquidistOptions& opt = {});

// Least-squares slope of log|y| on log t over the upper two thirds of the points.
double upper_slope(const std::vector<double>& t, const std::vector<double>& y);

struct EquidistScan {
  std::vector<EquidistPoint> points;
  std::vector<double> slope_so_far;  // NaN until two points are in the fit window
  double slope = 0;
};

EquidistScan equidist_scan(const SchottkyGroup& G, BoundaryPoint xi, const TestFunction& a,
                           const std::vector<double>& t_grid, const EquidistOptions& opt = {});

// ---- sums over the group of radial kernels ----

struct KernelSumOptions {
  int word_length = 6;
  GridOptions grid;
};

struct KernelSum {
  std::vector<double> values;  // one per kernel, identity term included
  double quad_error = 0;       // for the first kernel
  double tail_estimate = 0;    // shell-ratio extrapolation, first kernel
  std::vector<double> shell_abs;
  std::size_t words = 0;
};

// Range of d(m, beta m) over m in supp(a) and nonidentity beta with |beta| <= L.
std::pair<double, double> kernel_distance_range(const SchottkyGroup& G, const TestFunction& a, int L);

// sum over |beta| <= L of int a(m) k_i(d(m, beta m)) dv(m) for every kernel k_i.
KernelSum kernel_orbit_sum(const SchottkyGroup& G, const TestFunction& a, double t_budget,
                           const std::vector<std::function<double(double)>>& kernels,
                           const KernelSumOptions& opt);

// ---- boundary-averaged equidistribution ----

struct AveragedPoint {
  double t = 0;
  double value = 0;
  double reference = 0;  // poisson_constant() * int a dv
  double deviation = 0;  // |value - reference|
  double error = 0;
  double table_error = 0;
  int word_length = 0;
};

// Unfolded route: the xi-integral over the domain boundary becomes a sum over the group
// of int a(m) K(d(m, beta m)) dv(m).
AveragedPoint averaged_equidist(const SchottkyGroup& G, const TestFunction& a, double t,
                                const KernelSumOptions& opt = {});

// Direct route: Gauss-Legendre in xi over each boundary gap (trapezoid on S^1 for the
// trivial group) of int a |E_X(1/2+it; ., xi)|^2 dv.
FunctionalValue averaged_direct(const SchottkyGroup& G, const TestFunction& a, double t, int xi_nodes,
                                const EquidistOptions& opt = {});

// ---- phase-space measures ----

FunctionalValue liouville(const SchottkyGroup& G, const Symbol& a, double tol = 1e-12);
// Gauss-Legendre average of mu_xi over the boundary gaps; error from a lower order.
FunctionalValue boundary_average_mu(const SchottkyGroup& G, const Symbol& a, double tol, int order = 12);

// ---- trace comparison ----

struct TraceOptions {
  double geodesic_cutoff = 20.0;
  int word_length = 0;  // 0: ceil(cutoff / wall separation)
  double tol = 1e-2;
  double kernel_tol = 1e-10;
  GridOptions grid;
};

struct TraceRecord {
  double t = 0;
  double lhs = 0;
  double rhs_identity = 0;
  double rhs_geodesic_k0 = 0;
  double residual = 0;
  double oscillatory = 0;  // lhs - rhs_identity
  double lhs_error = 0;
  double lhs_tail = 0;
  double geodesic_error = 0;
  double geodesic_tail = 0;
  double lhs_literal = 0;
  double rhs_geodesic_printed_L = 0;
  double kernel_error = 0;
  int word_length = 0;
  std::size_t classes = 0;
  std::size_t classes_hit = 0;
};

// Arclength integral of a over one primitive period of the axis of g, evaluated through
// the quotient by reduction to the fundamental domain.
FunctionalValue axis_integral(const SchottkyGroup& G, const TestFunction& a, const DiskIsometry& g,
                              double primitive_length);

TraceRecord trace_compare(const SchottkyGroup& G, const TestFunction& a, double t, const TraceOptions& opt = {});

}  // namespace eisenlab
