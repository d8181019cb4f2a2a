#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "eisenlab/error.hpp"
#include "eisenlab/schottky.hpp"
#include "support.hpp"

using namespace eisenlab;
using namespace testing;

namespace {

const SchottkyGroup& reference() {
  static SchottkyGroup G = build_symmetric_schottky(2, 0.15);
  return G;
}

using lc = std::complex<long double>;

// 80-bit product of the letter matrices.
std::pair<lc, lc> product_ld(const SchottkyGroup& G, const std::vector<std::int8_t>& letters) {
  lc a = 1, b = 0;
  for (auto l : letters) {
    lc la(G.letter(l).a), lb(G.letter(l).b);
    lc na = a * la + b * std::conj(lb), nb = a * lb + b * std::conj(la);
    a = na;
    b = nb;
  }
  return {a, b};
}

// Translation length from the boundary derivative at a fixed point: b' z^2 + (a' - a) z - b = 0,
// and |Dg(z)| = e^{-l} at the attracting one.
double fixed_point_length(const SchottkyGroup& G, const std::vector<std::int8_t>& letters) {
  auto [a, b] = product_ld(G, letters);
  lc p = std::conj(b), q = std::conj(a) - a, r = -b;
  lc disc = std::sqrt(q * q - 4.0L * p * r);
  lc z = (std::abs(-q + disc) > std::abs(-q - disc)) ? (-q + disc) / (2.0L * p) : (-q - disc) / (2.0L * p);
  z /= std::abs(z);
  long double det = std::norm(a) - std::norm(b);
  return static_cast<double>(std::abs(std::log(std::norm(std::conj(b) * z + std::conj(a)) / det)));
}

// d(o, g o) from the 80-bit product.
double displacement_ld(const SchottkyGroup& G, const std::vector<std::int8_t>& letters) {
  return static_cast<double>(2 * std::asinh(std::abs(product_ld(G, letters).second)));
}

}  // namespace

TEST_SUITE("schottky") {

TEST_CASE("symmetric construction") {
  const SchottkyGroup& G = reference();
  CHECK(G.rank() == 2);
  CHECK(G.valid());
  REQUIRE(G.circles().size() == 4);
  for (int j = 0; j < 4; ++j) {
    // Letter j maps the exterior of circle j onto the interior of circle j^1.
    const auto& cj = G.circles()[j];
    cplx outside = std::polar(0.0, 0.0);
    cplx img = apply_raw(G.letter(j), outside);
    CHECK(G.circles()[inverse_letter(j)].contains(img));
    cplx on_arc = std::polar(1.0, cj.angle + 0.5 * cj.half_width);
    CHECK(std::abs(std::abs(apply_raw(G.letter(j), on_arc)) - 1.0) < 1e-13);
    CHECK(G.letter(j).det() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_symmetric_schottky(2, kPi / 4), Error);
  CHECK_THROWS_AS(build_symmetric_schottky(1, 0.1), Error);
  CHECK_THROWS_AS(SchottkyGroup({{0.0, 0.3}, {0.4, 0.3}, {2.0, 0.1}, {4.0, 0.1}}), Error);
  CHECK_THROWS_AS(SchottkyGroup({{0.0, 0.3}, {2.0, 0.2}, {3.0, 0.1}, {4.5, 0.1}}), Error);
}

TEST_CASE("serialization round trip") {
  SchottkyGroup G({{0.3, 0.2}, {2.1, 0.2}, {3.5, 0.12}, {5.0, 0.12}});
  SchottkyGroup H = SchottkyGroup::deserialize(G.serialize());
  for (int j = 0; j < 4; ++j) {
    CHECK(H.circles()[j].angle == G.circles()[j].angle);
    CHECK(H.circles()[j].half_width == doctest::Approx(G.circles()[j].half_width).epsilon(1e-15));
  }
  CHECK_THROWS_AS(SchottkyGroup::deserialize("rank 2\nbogus 1\n"), Error);
}

TEST_CASE("word enumeration") {
  const SchottkyGroup& G = reference();
  auto e = enumerate_words(G, EnumerationPolicy::length(0));
  REQUIRE(e.size() == 1);
  CHECK(e[0].letters.empty());
  auto words = enumerate_words(G, EnumerationPolicy::length(6));
  std::map<size_t, size_t> per;
  size_t prev = 0;
  std::set<std::vector<std::int8_t>> seen;
  for (const auto& w : words) {
    CHECK(w.letters.size() >= prev);
    prev = w.letters.size();
    per[w.letters.size()]++;
    for (size_t i = 1; i < w.letters.size(); ++i) CHECK(w.letters[i] != inverse_letter(w.letters[i - 1]));
    CHECK(seen.insert(w.letters).second);
    DiskIsometry ref = word_matrix(G, w.letters);
    CHECK(std::abs(ref.a - w.g.a) + std::abs(ref.b - w.g.b) < 1e-10 * std::abs(ref.a));
    CHECK(std::abs(w.displacement - displacement_ld(G, w.letters)) < 1e-10);
  }
  size_t total = 1;
  for (int L = 1; L <= 6; ++L) {
    size_t c = 4;
    for (int j = 1; j < L; ++j) c *= 3;
    CHECK(per[L] == c);
    total += c;
  }
  CHECK(words.size() == total);
}

TEST_CASE("free group counts for rank 3") {
  SchottkyGroup G = build_symmetric_schottky(3, 0.1);
  size_t total = 1, shell = 6;
  for (int L = 1; L <= 5; ++L) {
    total += shell;
    shell *= 5;
  }
  CHECK(enumerate_words(G, EnumerationPolicy::length(5)).size() == total);
}

TEST_CASE("displacement enumeration is exact") {
  const SchottkyGroup& G = reference();
  for (double T : {6.0, 8.0, 11.0}) {
    auto by_len = enumerate_words(G, EnumerationPolicy::length(int(T / G.min_wall_separation()) + 2));
    std::set<std::vector<std::int8_t>> brute;
    for (const auto& w : by_len)
      if (w.displacement <= T) brute.insert(w.letters);
    std::set<std::vector<std::int8_t>> fast;
    for (const auto& w : enumerate_words(G, EnumerationPolicy::displacement(T))) fast.insert(w.letters);
    CHECK(fast == brute);
    CHECK(orbit_count(G, T) == brute.size());
  }
  CHECK(orbit_count(G, 4.0) == 1);
  size_t prev = 0;
  for (double T = 1; T <= 14; T += 0.5) {
    size_t n = orbit_count(G, T);
    CHECK(n >= prev);
    prev = n;
  }
  EnumerationPolicy p = EnumerationPolicy::length(8);
  p.cap = 1000;
  CHECK_THROWS_AS(enumerate_words(G, p), Error);
}

TEST_CASE("displacement is subadditive") {
  const SchottkyGroup& G = reference();
  auto w = enumerate_words(G, EnumerationPolicy::length(3));
  for (const auto& x : w)
    for (const auto& y : w) CHECK(displacement(x.g * y.g) <= x.displacement + y.displacement + 1e-10);
}

TEST_CASE("critical exponent") {
  DeltaReport d = estimate_delta(reference());
  CHECK(std::abs(d.counting.value - d.bisection.value) < 0.02);
  CHECK(d.value + d.uncertainty < 0.5);
  CHECK(d.value > 0);

  SchottkyGroup cyclic = build_symmetric_schottky(1, 0.3, true);
  DeltaConfig small;
  small.t_max = 40;
  DeltaReport dc = estimate_delta(cyclic, small);
  CHECK(dc.counting.value < 0.05);
  CHECK(dc.bisection.value < 0.05);

  double prev = 1.0;
  for (double w : {0.25, 0.15, 0.08, 0.04}) {
    double v = estimate_delta(build_symmetric_schottky(2, w)).value;
    CHECK(v < prev);
    prev = v;
  }
  DeltaConfig r3;
  r3.max_length = 8;
  r3.t_max = 30;
  CHECK(estimate_delta(build_symmetric_schottky(3, 0.05), r3).value < estimate_delta(build_symmetric_schottky(3, 0.15), r3).value);
}

TEST_CASE("Poincare series shells decay above the exponent") {
  const SchottkyGroup& G = reference();
  DeltaReport d = estimate_delta(G);
  double s = d.value + d.uncertainty + 0.15;
  std::vector<double> shell(11, 0.0);
  for_each_word(G, EnumerationPolicy::length(10), [&](const Word& w) {
    shell[w.letters.size()] += std::exp(-s * w.displacement);
  });
  // Consecutive shells are at least one wall separation further out.
  double bound = std::exp(-(s - d.value - d.uncertainty) * 0.5 * G.min_wall_separation());
  for (int L = 4; L <= 10; ++L) CHECK(shell[L] / shell[L - 1] < bound);
}

TEST_CASE("closed geodesics") {
  const SchottkyGroup& G = reference();
  CHECK(enumerate_geodesics(G, 5.0).empty());
  auto geo = enumerate_geodesics(G, 12.0);
  REQUIRE(!geo.empty());
  double sys = geo.front().length;
  // The generator axes pass through o, so the systole equals the generator displacement.
  CHECK(std::abs(sys - displacement(G.generators()[0])) < 1e-10);
  for (size_t i = 1; i < geo.size(); ++i) CHECK(geo[i].length >= geo[i - 1].length);

  std::set<std::vector<std::int8_t>> words;
  for (const auto& c : geo) {
    const auto& w = c.cyclic_word;
    CHECK(words.insert(w).second);
    CHECK(w.front() != inverse_letter(w.back()));
    for (size_t r = 1; r < w.size(); ++r) {
      std::vector<std::int8_t> rot(w.begin() + r, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + r);
      CHECK(w <= rot);
    }
    CHECK(std::abs(c.length - 2 * std::acosh(std::abs(c.g.a.real()))) < 1e-12);
    CHECK(c.length <= 12.0);
    if (!c.primitive) {
      double base = translation_length(word_matrix(G, c.multiplicity_base));
      CHECK(std::abs(c.length - c.power * base) < 1e-10);
    }
  }
  // g and g^{-1} are distinct classes.
  CHECK(words.count({0}) == 1);
  CHECK(words.count({1}) == 1);
  CHECK(std::count_if(geo.begin(), geo.end(), [](const ClosedGeodesic& c) { return !c.primitive; }) > 0);

  // Trace length against the multiplier at a fixed point.
  int checked = 0;
  for (const auto& c : enumerate_geodesics(G, 20.0)) {
    CHECK(std::abs(c.length - fixed_point_length(G, c.cyclic_word)) < 1e-8);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("fundamental domain") {
  const SchottkyGroup& G = reference();
  CHECK(point_in_fundamental_domain(G, DiskPoint()));
  for (const auto& c : G.circles()) CHECK_FALSE(point_in_fundamental_domain(G, DiskPoint(std::polar(0.995, c.angle))));
  auto words = enumerate_words(G, EnumerationPolicy::length(7));
  for (int i = 0; i < 30; ++i) {
    DiskPoint m = random_point(0.97);
    Reduction r = reduce_to_domain(G, m);
    CHECK(point_in_fundamental_domain(G, r.point));
    CHECK(std::abs(apply(r.w, m).z() - r.point.z()) < 1e-9);
    int hits = 0;
    for (const auto& w : words) {
      DiskPoint p = apply(w.g, m);
      // Stay away from the boundary circles, where membership is ambiguous in rounding.
      bool inside = true;
      for (const auto& c : G.circles())
        if (std::abs(p.z() - c.center()) < c.radius() * (1 + 1e-9)) inside = false;
      hits += inside;
    }
    CHECK(hits == 1);
  }
}

}
