#pragma once

#include <complex>
#include <vector>

namespace eisenlab {

using cplx = std::complex<double>;

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached; safe to call concurrently.
const GaussRule& gauss_legendre(int q);

// Piecewise Chebyshev interpolant of a complex function on [lo, hi].
class ChebTable {
 public:
  ChebTable() = default;
  // Sample abscissae in panel-major order; fill values in that order and call build().
  ChebTable(double lo, double hi, int panels, int order);
  ChebTable(std::vector<double> edges, int order);
  const std::vector<double>& sample_points() const { return pts_; }
  void build(const std::vector<cplx>& values);

  cplx operator()(double x) const;
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  int panels() const { return static_cast<int>(edges_.size()) - 1; }

 private:
  std::vector<double> edges_;
  int order_ = 0;
  std::vector<double> pts_;
  std::vector<cplx> coef_;
};

// Least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eisenlab
