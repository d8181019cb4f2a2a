#include "eisenlab/grid.hpp"

#include <algorithm>
#include <cstdio>

#include "eisenlab/error.hpp"
#include "eisenlab/quadrature.hpp"
#include "eisenlab/schottky.hpp"

namespace eisenlab {

void check_support(const SchottkyGroup& G, const TestFunction& a, double margin) {
  double d = G.domain_margin(a.center);
  if (d < a.radius + margin) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "test function support (radius %.6g) is within %.6g of a pairing geodesic; distance %.6g",
                  a.radius, margin, d);
    throw Error(ErrorKind::SupportViolation, buf);
  }
}

namespace {

void build_rings(DiskPoint c, double R, double t, const GridOptions& opt, int order, bool coarse,
                 std::vector<GridNode>& nodes, std::vector<std::size_t>& rings) {
  int panels = std::max(opt.min_radial_panels, int(std::ceil(R * t / opt.radial_panel_phase)));
  double H = R / panels;
  const GaussRule& g = gauss_legendre(order);
  cplx cz = c.z();
  rings.assign(1, 0);
  for (int p = 0; p < panels; ++p) {
    for (int j = 0; j < order; ++j) {
      double rho = H * (p + 0.5 + 0.5 * g.x[j]);
      double wr = 0.5 * H * g.w[j] * std::sinh(rho);
      int n = int(std::ceil(opt.angular_nodes_per_mode * 2.0 * t * std::sinh(rho)));
      n = std::max(n, opt.min_angular_nodes);
      n += n % 2;
      if (coarse) n /= 2;
      double r = std::tanh(0.5 * rho);
      for (int k = 0; k < n; ++k) {
        cplx z = std::polar(r, 2.0 * kPi * k / n);
        cplx m = (z + cz) / (1.0 + std::conj(cz) * z);
        nodes.push_back({m, wr * 2.0 * kPi / n, rho});
      }
      rings.push_back(nodes.size());
    }
  }
}

}  // namespace

QuadratureGrid::QuadratureGrid(DiskPoint center, double radius, double t_budget, GridOptions opt)
    : center_(center), radius_(radius), budget_(t_budget) {
  if (!(radius > 0)) throw Error(ErrorKind::InvalidConfiguration, "grid radius must be positive");
  build_rings(center, radius, t_budget, opt, opt.radial_order, false, fine_, fine_rings_);
  build_rings(center, radius, t_budget, opt, opt.coarse_radial_order, true, coarse_, coarse_rings_);
}

void check_budget(const QuadratureGrid& g, double t) {
  if (std::abs(t) > g.budget() * (1 + 1e-12)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "t = %.6g exceeds the grid oscillation budget %.6g", t, g.budget());
    throw Error(ErrorKind::OscillationBudgetExceeded, buf);
  }
}

}  // namespace eisenlab
