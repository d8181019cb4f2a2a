#include "eisenlab/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "eisenlab/error.hpp"
#include "eisenlab/quadrature.hpp"

namespace eisenlab {

namespace {

double angular_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * kPi);
  return std::min(d, 2 * kPi - d);
}

// Sends the exterior of the circle at angle `from` onto the interior of the circle at `to`.
DiskIsometry pairing_map(double from, double to, double w) {
  cplx a0(1.0 / std::sin(w), 0.0), b0(1.0 / std::tan(w), 0.0);
  double alpha = -(from + kPi), beta = to;
  DiskIsometry g{std::polar(1.0, 0.5 * (alpha + beta)) * a0, std::polar(1.0, 0.5 * (beta - alpha)) * b0};
  return g.normalized();
}

// Hyperbolic distance from o to the geodesic g(C) where C has boundary endpoints e1, e2.
// The image chord is |e1 - e2| |Dg(e1)|^{1/2} |Dg(e2)|^{1/2}, which stays accurate for deep words.
double origin_to_image_geodesic(const DiskIsometry& g, cplx e1, cplx e2) {
  double den = std::abs(std::conj(g.b) * e1 + std::conj(g.a)) * std::abs(std::conj(g.b) * e2 + std::conj(g.a));
  double s = 0.5 * std::abs(e1 - e2) / den;
  if (s >= 1.0) return 0.0;
  double c = std::sqrt((1.0 - s) * (1.0 + s));
  double half = 0.5 * std::asin(s);
  double one_minus_rho = (s - 2.0 * std::sin(half) * std::sin(half)) / c;
  double rho = 1.0 - one_minus_rho;
  return std::log((1.0 + rho) / one_minus_rho);
}

}  // namespace

SchottkyGroup::SchottkyGroup(std::vector<PairingCircle> circles, bool allow_elementary)
    : circles_(std::move(circles)) {
  if (circles_.size() % 2 != 0)
    throw Error(ErrorKind::InvalidConfiguration, "pairing circles must come in pairs");
  int k = rank();
  if (k < 2 && !allow_elementary)
    throw Error(ErrorKind::InvalidConfiguration, "Schottky rank must be at least 2");
  for (const auto& c : circles_)
    if (!(c.half_width > 0 && c.half_width < kPi / 2))
      throw Error(ErrorKind::InvalidConfiguration, "circle half-width must lie in (0, pi/2)");
  for (int i = 0; i < k; ++i)
    if (std::abs(circles_[2 * i].half_width - circles_[2 * i + 1].half_width) > 1e-12)
      throw Error(ErrorKind::InvalidConfiguration, "paired circles must have equal radii");
  wall_sep_ = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < circles_.size(); ++i)
    for (size_t j = i + 1; j < circles_.size(); ++j) {
      const auto &ci = circles_[i], &cj = circles_[j];
      double gap = angular_gap(ci.angle, cj.angle) - ci.half_width - cj.half_width;
      if (!(gap > 1e-9)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "pairing disks %zu and %zu overlap or touch", i, j);
        throw Error(ErrorKind::InvalidConfiguration, buf);
      }
      double ri = ci.radius(), rj = cj.radius();
      double ch = (std::norm(ci.center() - cj.center()) - ri * ri - rj * rj) / (2 * ri * rj);
      wall_sep_ = std::min(wall_sep_, std::acosh(ch));
    }
  for (int i = 0; i < k; ++i) {
    DiskIsometry g = pairing_map(circles_[2 * i].angle, circles_[2 * i + 1].angle, circles_[2 * i].half_width);
    gens_.push_back(g);
    letter_mats_.push_back(g);
    letter_mats_.push_back(g.inverse());
  }
}

double SchottkyGroup::domain_margin(DiskPoint m) const {
  double best = std::numeric_limits<double>::infinity();
  double om = 1.0 - m.abs2();
  for (const auto& c : circles_) {
    double r = c.radius();
    double sh = (std::norm(m.z() - c.center()) - r * r) / (r * om);
    best = std::min(best, std::asinh(sh));
  }
  return best;
}

std::string SchottkyGroup::serialize() const {
  std::ostringstream os;
  char buf[64];
  os << "rank " << rank() << "\ncenters";
  for (const auto& c : circles_) {
    std::snprintf(buf, sizeof buf, " %.17g", c.angle);
    os << buf;
  }
  os << "\nradii";
  for (const auto& c : circles_) {
    std::snprintf(buf, sizeof buf, " %.17g", c.radius());
    os << buf;
  }
  os << "\n";
  return os.str();
}

SchottkyGroup SchottkyGroup::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string key;
  int k = -1;
  std::vector<double> centers, radii;
  while (is >> key) {
    if (key == "rank") {
      is >> k;
    } else if (key == "centers" || key == "radii") {
      auto& dst = key == "centers" ? centers : radii;
      for (int i = 0; i < 2 * k; ++i) {
        double v;
        if (!(is >> v)) throw Error(ErrorKind::Config, "truncated group serialization");
        dst.push_back(v);
      }
    } else {
      throw Error(ErrorKind::Config, "unknown key in group serialization: " + key);
    }
  }
  if (k < 0 || centers.size() != size_t(2 * k) || radii.size() != size_t(2 * k))
    throw Error(ErrorKind::Config, "incomplete group serialization");
  std::vector<PairingCircle> cs;
  for (int i = 0; i < 2 * k; ++i) cs.push_back({centers[i], std::atan(radii[i])});
  return SchottkyGroup(cs, true);
}

SchottkyGroup build_symmetric_schottky(int k, double half_width, bool allow_elementary) {
  if (k < 0) throw Error(ErrorKind::InvalidConfiguration, "negative rank");
  std::vector<PairingCircle> cs;
  for (int i = 0; i < k; ++i) {
    double th = kPi * i / k;
    cs.push_back({th + kPi, half_width});
    cs.push_back({th, half_width});
  }
  return SchottkyGroup(cs, allow_elementary);
}

DiskIsometry word_matrix(const SchottkyGroup& G, const std::vector<std::int8_t>& letters) {
  DiskIsometry g;
  for (auto l : letters) g = g * G.letter(l);
  return g;
}

std::string word_string(const std::vector<std::int8_t>& letters) {
  if (letters.empty()) return "e";
  std::string s;
  for (auto l : letters) {
    s += char('a' + l / 2);
    if (l % 2) s += '\'';
  }
  return s;
}

void for_each_word(const SchottkyGroup& G, const EnumerationPolicy& policy,
                   const std::function<void(const Word&)>& visit) {
  const bool by_len = policy.kind == EnumerationPolicy::MaxLength;
  const double T = policy.max_displacement;
  const int nl = G.letters();
  std::size_t emitted = 0;
  auto emit = [&](const Word& w) {
    if (++emitted > policy.cap)
      throw Error(ErrorKind::ResourceLimit, "word enumeration exceeded cap of " + std::to_string(policy.cap));
    visit(w);
  };

  // Endpoints of the boundary arc of each pairing disk.
  std::vector<std::pair<cplx, cplx>> arcs;
  for (const auto& c : G.circles())
    arcs.push_back({std::polar(1.0, c.angle - c.half_width), std::polar(1.0, c.angle + c.half_width)});

  std::vector<Word> level(1);
  if (by_len || T >= 0) emit(level[0]);
  for (int len = 1;; ++len) {
    if (by_len && len > policy.max_length) break;
    std::vector<Word> next;
    for (const Word& w : level) {
      int last = w.letters.empty() ? -1 : w.letters.back();
      for (int y = 0; y < nl; ++y) {
        if (last >= 0 && y == inverse_letter(last)) continue;
        if (!by_len) {
          // Every descendant of w*y sits in w(D_{y^1}).
          const auto& e = arcs[inverse_letter(y)];
          double bound = origin_to_image_geodesic(w.g, e.first, e.second);
          if (bound > T + 1e-9) continue;
        }
        Word c;
        c.letters = w.letters;
        c.letters.push_back(static_cast<std::int8_t>(y));
        c.g = w.g * G.letter(y);
        c.displacement = displacement(c.g);
        next.push_back(std::move(c));
      }
    }
    if (next.empty()) break;
    for (const Word& c : next)
      if (by_len || c.displacement <= T) emit(c);
    if (next.size() > policy.cap)
      throw Error(ErrorKind::ResourceLimit, "word frontier exceeded cap");
    level.swap(next);
  }
}

std::vector<Word> enumerate_words(const SchottkyGroup& G, const EnumerationPolicy& policy) {
  std::vector<Word> out;
  for_each_word(G, policy, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::size_t orbit_count(const SchottkyGroup& G, double T) {
  std::size_t n = 0;
  for_each_word(G, EnumerationPolicy::displacement(T), [&](const Word&) { ++n; });
  return n;
}

namespace {

DeltaEstimate counting_estimate(const SchottkyGroup& G, const DeltaConfig& cfg) {
  std::vector<double> d;
  EnumerationPolicy p = EnumerationPolicy::displacement(cfg.t_max);
  p.cap = cfg.cap;
  for_each_word(G, p, [&](const Word& w) { d.push_back(w.displacement); });
  std::sort(d.begin(), d.end());
  const int npts = 64;
  std::vector<double> T(npts), logN(npts);
  for (int i = 0; i < npts; ++i) {
    T[i] = cfg.t_max * (0.4 + 0.6 * i / (npts - 1));
    logN[i] = std::log(double(std::upper_bound(d.begin(), d.end(), T[i]) - d.begin()));
  }
  double slope = ls_slope(T, logN);
  int h = npts / 2;
  double s1 = ls_slope({T.begin(), T.begin() + h}, {logN.begin(), logN.begin() + h});
  double s2 = ls_slope({T.begin() + h, T.end()}, {logN.begin() + h, logN.end()});
  return {DeltaEstimate::CountingRegression, slope, std::abs(s1 - s2)};
}

// Root in s of S_L(s) = S_{L-1}(s), S_j(s) = sum over words of length j of e^{-s d(o, g o)}.
double shell_root(const std::vector<double>& prev, const std::vector<double>& cur, double tol) {
  auto ratio_log = [&](double s) {
    // log-sum-exp for both shells.
    auto lse = [&](const std::vector<double>& v) {
      double m = -std::numeric_limits<double>::infinity();
      for (double x : v) m = std::max(m, -s * x);
      double acc = 0;
      for (double x : v) acc += std::exp(-s * x - m);
      return m + std::log(acc);
    };
    return lse(cur) - lse(prev);
  };
  double lo = 0.0, hi = 1.0;
  if (ratio_log(lo) <= 0) return 0.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (ratio_log(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DeltaEstimate bisection_estimate(const SchottkyGroup& G, const DeltaConfig& cfg) {
  std::vector<std::vector<double>> shells(cfg.max_length + 1);
  EnumerationPolicy p = EnumerationPolicy::length(cfg.max_length);
  p.cap = cfg.cap;
  for_each_word(G, p, [&](const Word& w) { shells[w.letters.size()].push_back(w.displacement); });
  int L = cfg.max_length;
  if (L < 2 || shells[L].empty()) return {DeltaEstimate::PoincareBisection, 0.0, 1.0};
  double tol = 0.25 * cfg.bisection_tol;
  double a = shell_root(shells[L - 1], shells[L], tol);
  double b = shell_root(shells[L - 2], shells[L - 1], tol);
  return {DeltaEstimate::PoincareBisection, a, std::abs(a - b) + cfg.bisection_tol};
}

}  // namespace

DeltaReport estimate_delta(const SchottkyGroup& G, const DeltaConfig& cfg) {
  DeltaReport r;
  r.counting = counting_estimate(G, cfg);
  r.bisection = bisection_estimate(G, cfg);
  double gap = std::abs(r.counting.value - r.bisection.value);
  if (gap > 3.0 * (r.counting.uncertainty + r.bisection.uncertainty))
    throw Error(ErrorKind::NonConvergence, "delta estimators disagree: " + std::to_string(r.counting.value) +
                                               " vs " + std::to_string(r.bisection.value));
  r.value = r.bisection.value;
  r.uncertainty = std::max(r.bisection.uncertainty, gap);
  return r;
}

namespace {

bool is_least_rotation(const std::vector<std::int8_t>& w) {
  size_t n = w.size();
  for (size_t r = 1; r < n; ++r)
    for (size_t i = 0; i < n; ++i) {
      auto a = w[(i + r) % n], b = w[i];
      if (a < b) return false;
      if (a > b) break;
    }
  return true;
}

size_t primitive_period(const std::vector<std::int8_t>& w) {
  size_t n = w.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i) ok = w[i] == w[(i + p) % n];
    if (ok) return p;
  }
  return n;
}

}  // namespace

std::vector<ClosedGeodesic> enumerate_geodesics(const SchottkyGroup& G, double max_length, std::size_t cap) {
  std::vector<ClosedGeodesic> out;
  if (G.rank() == 0) return out;
  int Lb = static_cast<int>(std::floor(max_length / G.min_wall_separation() + 1e-9));
  const int nl = G.letters();
  std::size_t visited = 0;
  std::vector<std::int8_t> w;
  std::vector<DiskIsometry> prefix{DiskIsometry::identity()};
  std::function<void()> rec = [&] {
    if (!w.empty() && w.front() != inverse_letter(w.back()) && is_least_rotation(w)) {
      double len = translation_length(prefix.back());
      if (len <= max_length) {
        ClosedGeodesic c;
        c.cyclic_word = w;
        c.length = len;
        size_t p = primitive_period(w);
        c.primitive = p == w.size();
        c.power = static_cast<int>(w.size() / p);
        c.multiplicity_base.assign(w.begin(), w.begin() + p);
        c.g = prefix.back();
        out.push_back(std::move(c));
      }
    }
    if (static_cast<int>(w.size()) == Lb) return;
    for (int y = 0; y < nl; ++y) {
      if (!w.empty() && y == inverse_letter(w.back())) continue;
      // A least rotation never starts with a letter larger than any later one.
      if (!w.empty() && y < w.front()) continue;
      if (++visited > cap) throw Error(ErrorKind::ResourceLimit, "geodesic enumeration exceeded cap");
      w.push_back(static_cast<std::int8_t>(y));
      prefix.push_back(prefix.back() * G.letter(y));
      rec();
      w.pop_back();
      prefix.pop_back();
    }
  };
  rec();
  std::sort(out.begin(), out.end(), [](const ClosedGeodesic& a, const ClosedGeodesic& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.cyclic_word < b.cyclic_word;
  });
  return out;
}

bool point_in_fundamental_domain(const SchottkyGroup& G, DiskPoint m) {
  for (const auto& c : G.circles())
    if (c.contains(m.z())) return false;
  return true;
}

Reduction reduce_to_domain(const SchottkyGroup& G, DiskPoint m, int max_steps) {
  Reduction r{m, DiskIsometry::identity(), 0};
  for (;;) {
    int hit = -1;
    // Points on a wall count as reduced; otherwise rounding can bounce them between paired walls.
    for (int j = 0; j < G.letters(); ++j)
      if (std::abs(r.point.z() - G.circles()[j].center()) < G.circles()[j].radius() * (1 - 1e-12)) {
        hit = j;
        break;
      }
    if (hit < 0) return r;
    if (++r.steps > max_steps) throw Error(ErrorKind::ResourceLimit, "domain reduction did not terminate");
    r.point = apply(G.letter(hit), r.point);
    r.w = G.letter(hit) * r.w;
  }
}

}  // namespace eisenlab
