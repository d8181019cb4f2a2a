#include "eisenlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <random>

#include "eisenlab/config.hpp"
#include "eisenlab/eisenstein.hpp"
#include "eisenlab/error.hpp"
#include "eisenlab/experiments.hpp"
#include "eisenlab/parallel.hpp"
#include "eisenlab/schottky.hpp"
#include "eisenlab/table.hpp"

namespace eisenlab {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"validate", "delta",    "count",   "geodesics",
                                             "eisenstein", "equidist", "average", "trace"};
  return s;
}

namespace {

#ifdef __clang__
constexpr const char* kCompiler = "clang " __clang_version__;
#else
constexpr const char* kCompiler = "gcc " __VERSION__;
#endif

struct Outcome {
  ExperimentTable table;
  json results = json::object();
};

DeltaConfig delta_config(const RunConfig& c) {
  DeltaConfig d;
  d.t_max = c.delta_t_max;
  d.max_length = c.delta_max_length;
  return d;
}

double systole(const SchottkyGroup& G) {
  for (double cut = std::max(1.0, 2.0 * G.min_wall_separation());; cut *= 1.5) {
    auto geo = enumerate_geodesics(G, cut);
    if (!geo.empty()) return geo.front().length;
  }
}

Outcome run_validate(const RunConfig& c) {
  SchottkyGroup G = c.group();
  TestFunction a = c.bump();
  Outcome o;
  double margin = G.domain_margin(a.center) - a.radius;
  check_support(G, a);
  validate_xi(G, BoundaryPoint(c.xi));

  // Sampled cross-check of the support test: points of the bump support must stay in F.
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int samples = 512;
  for (int i = 0; i < samples; ++i) {
    double rho = a.radius * std::sqrt(u(rng)), th = 2 * kPi * u(rng);
    DiskIsometry to_center = DiskIsometry::translation(dist_from_origin(a.center), std::arg(a.center.z()));
    DiskPoint m = apply(to_center, DiskPoint(std::polar(std::tanh(0.5 * rho), th)));
    if (!point_in_fundamental_domain(G, m))
      throw Error(ErrorKind::SupportViolation, "sampled support point lies outside the fundamental domain");
  }

  DeltaReport d = estimate_delta(G, delta_config(c));
  double sys = systole(G);
  o.table.add(std::nullopt, "rank", G.rank(), 0);
  o.table.add(std::nullopt, "wall_separation", G.min_wall_separation(), 0);
  o.table.add(std::nullopt, "systole", sys, 0);
  o.table.add(std::nullopt, "delta", d.value, d.uncertainty);
  o.table.add(std::nullopt, "bump_margin", margin, 0);
  o.results = {{"valid", true},
               {"rank", G.rank()},
               {"group", G.serialize()},
               {"delta", d.value},
               {"delta_uncertainty", d.uncertainty},
               {"systole", sys},
               {"bump_margin", margin},
               {"support_samples", samples}};
  return o;
}

Outcome run_delta(const RunConfig& c) {
  SchottkyGroup G = c.group();
  DeltaReport d = estimate_delta(G, delta_config(c));
  Outcome o;
  o.table.add(std::nullopt, "delta_counting", d.counting.value, d.counting.uncertainty);
  o.table.add(std::nullopt, "delta_bisection", d.bisection.value, d.bisection.uncertainty);
  o.table.add(std::nullopt, "delta", d.value, d.uncertainty);
  o.results = {{"delta", d.value}, {"delta_uncertainty", d.uncertainty}};
  return o;
}

Outcome run_count(const RunConfig& c) {
  SchottkyGroup G = c.group();
  Outcome o;
  for (double T : c.count_T) o.table.add(T, "N", static_cast<double>(orbit_count(G, T)), 0);
  return o;
}

Outcome run_geodesics(const RunConfig& c) {
  SchottkyGroup G = c.group();
  Outcome o{ExperimentTable({"word", "primitive", "power"})};
  auto geo = enumerate_geodesics(G, c.geodesics_max_length);
  for (const auto& g : geo)
    o.table.add(std::nullopt, "length", g.length, 0, {word_string(g.cyclic_word), g.primitive ? "1" : "0", cell(g.power)});
  o.results = {{"classes", geo.size()}};
  if (!geo.empty()) o.results["systole"] = geo.front().length;
  return o;
}

Outcome run_eisenstein(const RunConfig& c) {
  SchottkyGroup G = c.group();
  BoundaryPoint xi(c.xi);
  Outcome o{ExperimentTable({"point", "m_re", "m_im", "imag", "truncation_length", "terms"})};
  for (double t : c.eisenstein_t)
    for (std::size_t i = 0; i < c.eisenstein_m_re.size(); ++i) {
      cplx z(c.eisenstein_m_re[i], c.eisenstein_m_im[i]);
      if (std::abs(z) >= 1) throw Error(ErrorKind::Config, "eisenstein evaluation point outside the disk");
      auto e = eisenstein(G, SpectralParameter{1, t}, DiskPoint(z), xi, c.eisenstein_tol);
      o.table.add(t, "E[" + std::to_string(i) + "]", e.value.real(), e.tail_bound,
                  {cell(i), cell(z.real()), cell(z.imag()), cell(e.value.imag()), cell(e.truncation_length),
                   cell(e.terms_used)});
    }
  return o;
}

Outcome run_equidist(const RunConfig& c) {
  SchottkyGroup G = c.group();
  TestFunction a = c.bump();
  check_support(G, a);
  EquidistOptions opt;
  opt.tol = c.series_tol;
  auto scan = equidist_scan(G, BoundaryPoint(c.xi), a, c.t_grid, opt);
  Outcome o{ExperimentTable({"slope_so_far", "signed", "diag", "truncation_length", "words", "nodes"})};
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const auto& p = scan.points[i];
    o.table.add(p.t, "D", p.D, p.error,
                {cell(scan.slope_so_far[i]), cell(p.signed_value), cell(p.diag), cell(p.truncation_length),
                 cell(p.words), cell(p.nodes)});
  }
  DeltaReport d = estimate_delta(G, delta_config(c));
  o.results = {{"slope", scan.slope},
               {"delta", d.value},
               {"delta_uncertainty", d.uncertainty},
               {"reference_slope", -(1.0 - 2.0 * d.value)}};
  return o;
}

Outcome run_average(const RunConfig& c) {
  SchottkyGroup G = c.group();
  TestFunction a = c.bump();
  check_support(G, a);
  KernelSumOptions opt;
  opt.word_length = c.average_word_length;
  Outcome o{ExperimentTable({"averaged", "reference", "table_error", "word_length"})};
  std::vector<double> ts, dev;
  for (double t : c.t_grid) {
    auto p = averaged_equidist(G, a, t, opt);
    o.table.add(t, "deviation", p.deviation, p.error,
                {cell(p.value), cell(p.reference), cell(p.table_error), cell(p.word_length)});
    ts.push_back(t);
    dev.push_back(p.deviation);
  }
  // Trivial-group control: the direct boundary average must not depend on t.
  SchottkyGroup trivial({}, true);
  Integral area = integrate(QuadratureGrid::for_function(a, 0.0), a);
  double ref = poisson_constant() * area.value, worst = 0;
  for (double t : c.t_grid) {
    FunctionalValue v = averaged_direct(trivial, a, t, c.average_control_nodes);
    double off = std::abs(v.value - ref);
    worst = std::max(worst, off);
    o.table.add(t, "control_offset", off, v.error + poisson_constant() * area.error,
                {cell(v.value), cell(ref), cell(0.0), cell(0)});
  }
  DeltaReport d = estimate_delta(G, delta_config(c));
  o.results = {{"slope", upper_slope(ts, dev)},
               {"control_max_offset", worst},
               {"delta", d.value},
               {"delta_uncertainty", d.uncertainty},
               {"reference_slope", -(1.0 - 2.0 * d.value)}};
  return o;
}

Outcome run_trace(const RunConfig& c) {
  SchottkyGroup G = c.group();
  TestFunction a = c.bump();
  check_support(G, a);
  TraceOptions opt;
  opt.geodesic_cutoff = c.trace_cutoff;
  opt.word_length = c.trace_word_length;
  opt.tol = c.trace_tol;
  opt.kernel_tol = c.kernel_tol;
  Outcome o{ExperimentTable({"lhs", "rhs_identity", "rhs_geodesic", "oscillatory", "lhs_error", "lhs_tail",
                             "geodesic_error", "geodesic_tail", "lhs_literal", "rhs_geodesic_printed_L",
                             "kernel_error", "word_length", "classes", "classes_hit"})};
  for (double t : c.trace_t) {
    auto r = trace_compare(G, a, t, opt);
    double err = r.lhs_error + r.lhs_tail + r.geodesic_error + r.geodesic_tail;
    o.table.add(t, "residual", r.residual, err,
                {cell(r.lhs), cell(r.rhs_identity), cell(r.rhs_geodesic_k0), cell(r.oscillatory), cell(r.lhs_error),
                 cell(r.lhs_tail), cell(r.geodesic_error), cell(r.geodesic_tail), cell(r.lhs_literal),
                 cell(r.rhs_geodesic_printed_L), cell(r.kernel_error), cell(r.word_length), cell(r.classes),
                 cell(r.classes_hit)});
  }
  return o;
}

Outcome dispatch(const std::string& sub, const RunConfig& c) {
  if (sub == "validate") return run_validate(c);
  if (sub == "delta") return run_delta(c);
  if (sub == "count") return run_count(c);
  if (sub == "geodesics") return run_geodesics(c);
  if (sub == "eisenstein") return run_eisenstein(c);
  if (sub == "equidist") return run_equidist(c);
  if (sub == "average") return run_average(c);
  if (sub == "trace") return run_trace(c);
  throw Error(ErrorKind::Config, "unknown subcommand '" + sub + "'");
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + p.string());
  f << text;
}

}  // namespace

int run_subcommand(const CliRequest& req, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  fs::path dir = req.out_dir;
  try {
    RunConfig c = RunConfig::load(req.config_path);
    if (dir.empty()) dir = c.output_dir;
    if (!c.experiment.empty() && c.experiment != req.subcommand)
      throw Error(ErrorKind::Config, "config is for '" + c.experiment + "', not '" + req.subcommand + "'");
    int threads = req.threads >= 0 ? req.threads : c.threads;
    set_thread_count(threads);

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Config, "cannot create output directory " + dir.string());

    Outcome o = dispatch(req.subcommand, c);
    std::string csv_name = req.subcommand + ".csv";
    o.table.write((dir / csv_name).string());

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json m = {{"subcommand", req.subcommand},
              {"config_hash", content_hash(c.text)},
              {"config", c.text},
              {"version", kVersion},
              {"compiler", kCompiler},
              {"wall_time", wall},
              {"seed", c.seed},
              {"threads", thread_count()},
              {"outputs", {csv_name}},
              {"results", o.results}};
    write_text(dir / "manifest.json", m.dump(2) + "\n");
    out << (dir / csv_name).string() << "\n";
    return 0;
  } catch (const Error& e) {
    json rec = {{"error", kind_name(e.kind())},
                {"message", e.what()},
                {"exit_code", exit_code(e.kind())},
                {"subcommand", req.subcommand}};
    err << rec.dump() << "\n";
    std::error_code ec;
    if (!dir.empty() && fs::is_directory(dir, ec)) {
      std::ofstream f(dir / "error.json", std::ios::binary);
      f << rec.dump(2) << "\n";
    }
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    json rec = {{"error", "internal"}, {"message", e.what()}, {"exit_code", 4}, {"subcommand", req.subcommand}};
    err << rec.dump() << "\n";
    return 4;
  }
}

}  // namespace eisenlab
