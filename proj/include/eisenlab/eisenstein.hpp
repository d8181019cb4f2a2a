#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "eisenlab/geom.hpp"
#include "eisenlab/grid.hpp"
#include "eisenlab/schottky.hpp"

namespace eisenlab {

struct SeriesEvaluation {
  cplx value;
  int truncation_length = 0;
  double tail_bound = 0;
  std::size_t terms_used = 0;
};

// Throws XiOutsideDomain when xi is within 1e-6 of a pairing arc, or XiInLimitSet
// when the nested arcs containing xi shrink below 1e-9.
void validate_xi(const SchottkyGroup& G, BoundaryPoint xi);

// Geometric bound for the words beyond a given level. For exponent sigma the sum of
// |Dg(xi)|^sigma over level L+1, L+2, ... is at most sum_j coef(j) S_L(j), where S_L(j)
// collects level-L words whose image point lies on arc j.
class TailModel {
 public:
  TailModel() = default;
  TailModel(const SchottkyGroup& G, double sigma);
  double sigma() const { return sigma_; }
  const std::vector<double>& coef() const { return coef_; }
  int block() const { return block_; }

 private:
  double sigma_ = 0;
  int block_ = 0;
  std::vector<double> coef_;
};

// The points eta = g xi and weights log|Dg(xi)| for reduced words g, level by level.
// Words grow on the left, so every level reuses the previous one.
class BoundaryOrbit {
 public:
  BoundaryOrbit() = default;
  BoundaryOrbit(const SchottkyGroup& G, BoundaryPoint xi);

  void extend_to(int L, std::size_t cap = 10000000);
  int depth() const { return static_cast<int>(level_end_.size()) - 1; }
  std::size_t size(int L) const { return level_end_[L]; }  // words of length <= L
  const std::vector<cplx>& eta() const { return eta_; }
  const std::vector<double>& logw() const { return logw_; }
  BoundaryPoint xi() const { return xi_; }

  // Largest E_0(1; m, eta) over eta on the pairing arcs.
  double emax(cplx m) const;
  // Bound on sum over words longer than L of |Dg(xi)|^sigma; needs L >= 1.
  double weight_tail(const TailModel& tm, int L) const;
  // Bound on |sum over words longer than L of E_0(sigma + it; m, eta) |Dg|^sigma|.
  double tail_bound(const TailModel& tm, cplx m, int L) const;
  // Smallest L >= 1 with tail_bound < tol for every point in `points`.
  int length_for(const TailModel& tm, const std::vector<cplx>& points, double tol, std::size_t cap = 10000000);

  const SchottkyGroup& group() const { return *G_; }

 private:
  const SchottkyGroup* G_ = nullptr;
  BoundaryPoint xi_;
  std::vector<cplx> eta_;
  std::vector<double> logw_;
  std::vector<std::int8_t> last_;  // leftmost letter
  std::vector<std::size_t> level_end_;
  std::vector<double> arc_lo_, arc_hi_;
};

// Sum over words of length <= L of E_0(s; m, g xi) |Dg(xi)|^s, i.e. E_0(s; gamma m, xi) summed.
cplx orbit_sum(const BoundaryOrbit& orbit, cplx s, cplx m, int L);

SeriesEvaluation eisenstein(const SchottkyGroup& G, const SpectralParameter& s, DiskPoint m, BoundaryPoint xi,
                            double tol);
// Real exponent variant; s = 1 gives the harmonic density.
SeriesEvaluation eisenstein_real(const SchottkyGroup& G, double s, DiskPoint m, BoundaryPoint xi, double tol);
double harmonic_density(const SchottkyGroup& G, DiskPoint m, BoundaryPoint xi, double tol);

// Phase-space symbol a(m, v), with v a unit covector given by its angle.
struct Symbol {
  TestFunction support;
  std::function<double(DiskPoint, double)> fn;
  double sup = 1.0;  // bound on |fn|
};

struct FunctionalValue {
  double value = 0;
  double error = 0;
};

// int_F sum_g a(m, d phi_{g xi}(m)) E_0(1; m, g xi) |Dg(xi)| dv(m).
FunctionalValue mu_xi(const SchottkyGroup& G, const Symbol& a, BoundaryPoint xi, double tol);

}  // namespace eisenlab
