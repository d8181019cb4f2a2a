#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "eisenlab/geom.hpp"
#include "eisenlab/parallel.hpp"

namespace eisenlab {

class SchottkyGroup;

// Radial hyperbolic bump a(m) = b(d(center, m) / radius), b(u) = exp(1 - 1/(1-u^2)).
struct TestFunction {
  DiskPoint center;
  double radius = 1.0;

  double profile(double u) const { return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0; }
  double operator()(DiskPoint m) const { return profile(hyp_distance(center, m) / radius); }
};

// Throws SupportViolation unless the support keeps distance `margin` from every pairing geodesic.
void check_support(const SchottkyGroup& G, const TestFunction& a, double margin = 0.05);

struct GridNode {
  cplx m;
  double w;  // includes the hyperbolic area element
  double rho;
};

struct GridOptions {
  int radial_order = 16;
  int coarse_radial_order = 12;
  double radial_panel_phase = 8.0;   // t * panel width
  double angular_nodes_per_mode = 4.0;
  int min_radial_panels = 4;
  int min_angular_nodes = 32;
};

// Geodesic-polar grid about a test function's center: Gauss-Legendre panels in rho,
// trapezoid in theta with ring sizes scaled by sinh(rho). A coarse companion grid
// (lower radial order, every other angular node) supplies the error estimate.
class QuadratureGrid {
 public:
  QuadratureGrid() = default;
  QuadratureGrid(DiskPoint center, double radius, double t_budget, GridOptions opt = {});
  static QuadratureGrid for_function(const TestFunction& a, double t_budget, GridOptions opt = {}) {
    return QuadratureGrid(a.center, a.radius, t_budget, opt);
  }

  const std::vector<GridNode>& fine() const { return fine_; }
  const std::vector<GridNode>& coarse() const { return coarse_; }
  // Ring boundaries in fine()/coarse() for deterministic sharding.
  const std::vector<std::size_t>& fine_rings() const { return fine_rings_; }
  const std::vector<std::size_t>& coarse_rings() const { return coarse_rings_; }
  double budget() const { return budget_; }
  double radius() const { return radius_; }
  DiskPoint center() const { return center_; }

 private:
  DiskPoint center_;
  double radius_ = 0, budget_ = 0;
  std::vector<GridNode> fine_, coarse_;
  std::vector<std::size_t> fine_rings_, coarse_rings_;
};

template <int N>
using Vals = std::array<double, N>;

template <int N>
struct IntegralN {
  Vals<N> value{};
  Vals<N> coarse{};
  double error(int i) const { return std::abs(value[i] - coarse[i]); }
};

void check_budget(const QuadratureGrid& g, double t);

// Integrates a vector-valued f(node) over both node sets. Ring partial sums are
// combined in ring order, so the result does not depend on the thread count.
template <int N, class F>
IntegralN<N> integrate_n(const QuadratureGrid& grid, F&& f) {
  auto run = [&](const std::vector<GridNode>& nodes, const std::vector<std::size_t>& rings) {
    std::size_t nr = rings.size() - 1;
    std::vector<Vals<N>> part(nr);
    parallel_for(nr, [&](std::size_t r) {
      Vals<N> acc{};
      for (std::size_t i = rings[r]; i < rings[r + 1]; ++i) {
        Vals<N> v = f(nodes[i]);
        for (int k = 0; k < N; ++k) acc[k] += nodes[i].w * v[k];
      }
      part[r] = acc;
    });
    Vals<N> tot{};
    for (const auto& p : part)
      for (int k = 0; k < N; ++k) tot[k] += p[k];
    return tot;
  };
  IntegralN<N> out;
  out.value = run(grid.fine(), grid.fine_rings());
  out.coarse = run(grid.coarse(), grid.coarse_rings());
  return out;
}

struct Integral {
  double value;
  double error;
};

template <class F>
Integral integrate(const QuadratureGrid& grid, F&& f) {
  auto r = integrate_n<1>(grid, [&](const GridNode& n) { return Vals<1>{f(DiskPoint::unchecked(n.m))}; });
  return {r.value[0], r.error(0)};
}

}  // namespace eisenlab
