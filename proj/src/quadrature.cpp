#include "eisenlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace eisenlab {

namespace {

constexpr double kPiQ = 3.14159265358979323846;

GaussRule make_rule(int q) {
  GaussRule r;
  r.x.resize(q);
  r.w.resize(q);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(kPiQ * (i + 0.75) / (q + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) {
        p1 = x;
        p0 = 1;
      }
      dp = q * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= q; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1);
    double w = 2.0 / ((1 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[q - 1 - i] = x;
    r.w[i] = w;
    r.w[q - 1 - i] = w;
  }
  if (q % 2 == 1) r.x[q / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int q) {
  if (q < 1 || q > 512) throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[q];
  if (!slot) slot = std::make_unique<GaussRule>(make_rule(q));
  return *slot;
}

ChebTable::ChebTable(double lo, double hi, int panels, int order) : order_(order) {
  std::vector<double> e(panels + 1);
  for (int p = 0; p <= panels; ++p) e[p] = lo + (hi - lo) * p / panels;
  *this = ChebTable(std::move(e), order);
}

ChebTable::ChebTable(std::vector<double> edges, int order) : edges_(std::move(edges)), order_(order) {
  if (edges_.size() < 2) throw std::invalid_argument("ChebTable: need at least one panel");
  int np = panels();
  pts_.reserve(np * order);
  for (int p = 0; p < np; ++p) {
    double a = edges_[p], w = edges_[p + 1] - edges_[p];
    for (int j = 0; j < order; ++j) {
      double u = std::cos(kPiQ * (j + 0.5) / order);
      pts_.push_back(a + 0.5 * w * (u + 1.0));
    }
  }
}

void ChebTable::build(const std::vector<cplx>& values) {
  if (values.size() != pts_.size()) throw std::invalid_argument("ChebTable: value count mismatch");
  coef_.assign(pts_.size(), cplx(0));
  int n = order_;
  std::vector<double> cosv(n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) cosv[k * n + j] = std::cos(kPiQ * k * (j + 0.5) / n);
  for (int p = 0; p < panels(); ++p) {
    const cplx* f = &values[p * n];
    cplx* c = &coef_[p * n];
    for (int k = 0; k < n; ++k) {
      cplx s = 0;
      for (int j = 0; j < n; ++j) s += f[j] * cosv[k * n + j];
      c[k] = s * (2.0 / n);
    }
    c[0] *= 0.5;
  }
}

cplx ChebTable::operator()(double x) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  int p = static_cast<int>(it - edges_.begin()) - 1;
  if (p < 0) p = 0;
  if (p >= panels()) p = panels() - 1;
  double a = edges_[p], w = edges_[p + 1] - a;
  double u = 2.0 * (x - a) / w - 1.0;
  const cplx* c = &coef_[p * order_];
  cplx b1 = 0, b2 = 0;
  for (int k = order_ - 1; k >= 1; --k) {
    cplx b0 = 2.0 * u * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + c[0];
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace eisenlab
