#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "eisenlab/error.hpp"
#include "eisenlab/experiments.hpp"
#include "eisenlab/parallel.hpp"
#include "eisenlab/table.hpp"
#include "support.hpp"

using namespace eisenlab;
using namespace testing;

namespace {

const SchottkyGroup& reference() {
  static SchottkyGroup G = build_symmetric_schottky(2, 0.15);
  return G;
}

// mpmath: int_{-1}^{1} exp(1 - 1/(1 - u^2)) du
constexpr double kProfileIntegral = 1.20690032243787617533623799633;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Config;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("grid reproduces ball areas") {
  for (double r : {0.3, 1.0, 2.5})
    for (double budget : {0.0, 40.0}) {
      QuadratureGrid g(DiskPoint(cplx(0.2, -0.3)), r, budget);
      Integral area = integrate(g, [](DiskPoint) { return 1.0; });
      CHECK(rel(area.value, 4 * kPi * std::pow(std::sinh(r / 2), 2)) < 1e-8);
    }
}

TEST_CASE("odd integrands vanish") {
  DiskPoint c(cplx(-0.35, 0.2));
  QuadratureGrid g(c, 1.2, 20.0);
  // Real part of the point in coordinates centered at c.
  auto odd = [&](DiskPoint m) { return ((m.z() - c.z()) / (1.0 - std::conj(c.z()) * m.z())).real(); };
  CHECK(std::abs(integrate(g, odd).value) < 1e-10);
}

TEST_CASE("bump integral") {
  // mpmath: 2 pi r int_0^1 b(u) sinh(r u) du
  struct Row {
    double r, v;
  } rows[] = {{0.5, 0.3204967512090722744292175424}, {0.8, 0.834498559316623236278267142287},
              {1.0, 1.32443287644869935293983386131}};
  for (const auto& row : rows) {
    TestFunction a{random_point(0.5), row.r};
    Integral base = integrate(QuadratureGrid::for_function(a, 10.0), a);
    CHECK(std::abs(base.value - row.v) <= base.error);
    CHECK(rel(base.value, row.v) < 1e-9);
    GridOptions dense;
    dense.radial_order = 24;
    dense.angular_nodes_per_mode = 8;
    Integral fine = integrate(QuadratureGrid::for_function(a, 10.0, dense), a);
    CHECK(std::abs(fine.value - base.value) <= base.error + 1e-15);
  }
}

TEST_CASE("thread count does not change results") {
  TestFunction a{DiskPoint(cplx(0.1, 0.1)), 0.7};
  EquidistOptions opt;
  opt.tol = 1e-3;
  set_thread_count(1);
  EquidistPoint one = equidist_point(reference(), BoundaryPoint(0.7), a, 12.0, opt);
  set_thread_count(3);
  EquidistPoint three = equidist_point(reference(), BoundaryPoint(0.7), a, 12.0, opt);
  set_thread_count(0);
  CHECK(one.signed_value == three.signed_value);
  CHECK(one.error == three.error);
}

TEST_CASE("oscillation budget and support checks") {
  QuadratureGrid g(DiskPoint(), 1.0, 30.0);
  CHECK_NOTHROW(check_budget(g, 30.0));
  CHECK(kind_of([&] { check_budget(g, 31.0); }) == ErrorKind::OscillationBudgetExceeded);

  const SchottkyGroup& G = reference();
  TestFunction ok{DiskPoint(), 1.0};
  CHECK_NOTHROW(check_support(G, ok));
  TestFunction wide{DiskPoint(), 2.6};
  CHECK(kind_of([&] { check_support(G, wide); }) == ErrorKind::SupportViolation);
  TestFunction near_wall{DiskPoint(std::polar(0.8, G.circles()[2].angle)), 0.5};
  CHECK(kind_of([&] { equidist_point(G, BoundaryPoint(0.7), near_wall, 5.0); }) == ErrorKind::SupportViolation);
}

TEST_CASE("diagonal split") {
  const SchottkyGroup& G = reference();
  TestFunction a{DiskPoint(cplx(0.05, 0.1)), 0.6};
  EquidistOptions opt;
  opt.tol = 1e-3;
  opt.offdiagonal = false;
  for (double t : {0.0, 7.0, 23.0}) {
    EquidistPoint p = equidist_point(G, BoundaryPoint(0.7), a, t, opt);
    CHECK(p.D == 0.0);
    CHECK(p.diag > 0);
  }
  // On the trivial group |E_0(1/2+it)|^2 = E_0(1), so the off-diagonal part is empty.
  SchottkyGroup trivial({}, true);
  EquidistPoint q = equidist_point(trivial, BoundaryPoint(0.7), a, 30.0);
  CHECK(q.D < 1e-15);
}

TEST_CASE("equidistribution is stable under refinement") {
  const SchottkyGroup& G = reference();
  TestFunction a{DiskPoint(), 0.5};
  EquidistOptions opt;
  opt.tol = 1e-4;
  EquidistPoint p = equidist_point(G, BoundaryPoint(0.7), a, 40.0, opt);
  opt.grid.radial_order = 24;
  opt.grid.angular_nodes_per_mode = 8;
  EquidistPoint q = equidist_point(G, BoundaryPoint(0.7), a, 40.0, opt);
  CHECK(std::abs(q.signed_value - p.signed_value) <= p.error);
  CHECK(p.error < p.D);
}

TEST_CASE("slope fit") {
  std::vector<double> t, y;
  for (double x = 10; x <= 80; x *= 1.25) {
    t.push_back(x);
    y.push_back(3.0 * std::pow(x, -0.75));
  }
  CHECK(upper_slope(t, y) == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(std::isnan(upper_slope({2.0}, {1.0})));
  CHECK(std::isnan(upper_slope({1.0, 2.0, 3.0}, {1.0, 0.0, 1.0})));
}

TEST_CASE("Poisson integral") {
  for (int i = 0; i < 20; ++i) {
    FunctionalValue v = poisson_integral(random_point(0.9), 1e-13);
    CHECK(std::abs(v.value - poisson_constant()) < 1e-10);
  }
}

TEST_CASE("Liouville functional") {
  SchottkyGroup trivial({}, true);
  double ratio0 = 0;
  for (int i = 0; i < 5; ++i) {
    TestFunction b{random_point(0.6), uniform(0.3, 1.2)};
    Symbol a0{b, [&](DiskPoint m, double) { return b(m); }, 1.0};
    FunctionalValue l = liouville(trivial, a0);
    double area = integrate(QuadratureGrid::for_function(b, 0.0), b).value;
    double ratio = l.value / area;
    if (i == 0) ratio0 = ratio;
    CHECK(std::abs(ratio - ratio0) < 1e-9);
    CHECK(std::abs(ratio - poisson_constant()) < 1e-9);
  }
  TestFunction b{DiskPoint(cplx(0.1, 0.2)), 0.8};
  Symbol odd{b, [&](DiskPoint m, double v) { return b(m) * std::cos(v - 0.4); }, 1.0};
  FunctionalValue l = liouville(reference(), odd);
  CHECK(std::abs(l.value) <= l.error + 1e-12);
}

TEST_CASE("trivial group boundary average is t-independent") {
  SchottkyGroup trivial({}, true);
  TestFunction a{DiskPoint(cplx(0.2, 0.1)), 0.7};
  double area = integrate(QuadratureGrid::for_function(a, 0.0), a).value;
  for (double t : {3.0, 15.0, 40.0}) {
    FunctionalValue v = averaged_direct(trivial, a, t, 32);
    CHECK(std::abs(v.value - poisson_constant() * area) <= v.error + 1e-10);
    AveragedPoint p = averaged_equidist(trivial, a, t);
    CHECK(std::abs(p.value - poisson_constant() * area) < 1e-10);
  }
}

TEST_CASE("unfolded and direct boundary averages agree") {
  const SchottkyGroup& G = reference();
  TestFunction a{DiskPoint(), 0.5};
  EquidistOptions opt;
  opt.tol = 1e-3;
  FunctionalValue direct = averaged_direct(G, a, 6.0, 12, opt);
  AveragedPoint unfolded = averaged_equidist(G, a, 6.0);
  CHECK(std::abs(direct.value - unfolded.value) <= direct.error + unfolded.error);
}

TEST_CASE("kernel orbit sum counts words") {
  const SchottkyGroup& G = reference();
  TestFunction a{DiskPoint(), 1.0};
  KernelSumOptions opt;
  opt.word_length = 3;
  KernelSum s = kernel_orbit_sum(G, a, 0.0, {[](double) { return 1.0; }}, opt);
  double area = integrate(QuadratureGrid::for_function(a, 0.0), a).value;
  CHECK(s.words == 4 + 12 + 36);
  CHECK(rel(s.values[0], (s.words + 1) * area) < 1e-13);
  CHECK_THROWS_AS(kernel_orbit_sum(G, a, 0.0, {}, opt), Error);
}

TEST_CASE("axis integrals") {
  const SchottkyGroup& G = reference();
  // The axis of each generator is a diameter through o.
  for (double r : {0.6, 1.0}) {
    TestFunction a{DiskPoint(), r};
    for (const auto& g : G.generators()) {
      FunctionalValue I = axis_integral(G, a, g, translation_length(g));
      CHECK(std::abs(I.value - r * kProfileIntegral) < 1e-9);
    }
    // A power has the same axis and primitive period.
    DiskIsometry g2 = G.generators()[0] * G.generators()[0];
    CHECK(std::abs(axis_integral(G, a, g2, translation_length(G.generators()[0])).value - r * kProfileIntegral) < 1e-9);
  }
}

TEST_CASE("trace comparison off every short axis") {
  const SchottkyGroup& G = reference();
  TestFunction a{DiskPoint(std::polar(std::tanh(0.75), 0.25 * kPi)), 0.3};
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {20.0, 40.0, 60.0}) {
    TraceRecord r = trace_compare(G, a, t);
    CHECK(r.classes_hit == 0);
    CHECK(r.rhs_geodesic_k0 == 0.0);
    CHECK(std::abs(r.oscillatory) < prev);
    prev = std::abs(r.oscillatory);
  }
  TestFunction too_big{DiskPoint(), 2.6};
  CHECK_THROWS_AS(trace_compare(G, too_big, 10.0), Error);
  TraceOptions tight;
  tight.tol = 1e-6;
  CHECK(kind_of([&] { trace_compare(G, TestFunction{DiskPoint(), 1.0}, 30.0, tight); }) ==
        ErrorKind::CutoffInsufficient);
}

TEST_CASE("tables") {
  ExperimentTable tab({"note"});
  tab.add(1.0, "D", 0.1, 1e-3, {"a,b"});
  tab.add(2.0, "D", 0.05, 1e-3, {"x"});
  tab.add(std::nullopt, "slope", -0.5, 0.0, {""});
  CHECK(tab.to_csv() == "t,name,value,error,note\n1,D,0.1,0.001,\"a,b\"\n2,D,0.05,0.001,x\n,slope,-0.5,0,\n");
  CHECK_THROWS(tab.add(1.5, "D", 0.0, 0.0, {""}));
  CHECK_THROWS(tab.add(3.0, "D", 0.0, 0.0, {}));
  CHECK_THROWS(ExperimentTable({"value"}));

  for (int i = 0; i < 1000; ++i) {
    double x = std::ldexp(uniform(-1, 1), static_cast<int>(uniform(-60, 60)));
    std::string s = format_double(x);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");

  // FNV-1a 64 reference vectors
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

}
