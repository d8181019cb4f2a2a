#include "eisenlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eisenlab/error.hpp"

namespace eisenlab {

const std::map<std::string, std::string>& config_schema() {
  static const std::map<std::string, std::string> schema = {
      {"experiment", "name of the intended subcommand; checked when present"},
      {"group.rank", "rank k of the symmetric group (default 2)"},
      {"group.half_width", "angular half-width of each pairing arc, radians (default 0.15)"},
      {"group.centers", "explicit circle center angles, radians; pairs (2i, 2i+1)"},
      {"group.radii", "explicit Euclidean circle radii, same length as group.centers"},
      {"xi.theta", "boundary point angle, must lie in a boundary gap (default 0.7)"},
      {"bump.distance", "hyperbolic distance of the bump center from o (default 0)"},
      {"bump.angle", "direction of the bump center (default 0)"},
      {"bump.radius", "hyperbolic radius of the bump support (default 1)"},
      {"scan.t", "explicit strictly increasing t list"},
      {"scan.t_min", "geometric scan start (default 10)"},
      {"scan.t_max", "geometric scan end (default 80)"},
      {"scan.count", "geometric scan size (default 13)"},
      {"series.tol", "Eisenstein series tail tolerance in scans (default 1e-4)"},
      {"kernel.tol", "F_t quadrature tolerance (default 1e-10)"},
      {"trace.cutoff", "closed geodesic length cutoff (default 20)"},
      {"trace.word_length", "group word length for the kernel sum; 0 derives it from the cutoff"},
      {"trace.tol", "tail tolerance for the trace comparison (default 1e-2)"},
      {"trace.t", "t values for the trace comparison (default 30,40,50)"},
      {"average.word_length", "group word length for the averaged sum (default 6)"},
      {"average.control_nodes", "boundary nodes for the trivial-group control (default 16)"},
      {"delta.t_max", "counting window end (default 48)"},
      {"delta.max_length", "word length for the bisection estimator (default 11)"},
      {"count.T", "displacement radii for orbit counts (default 4,8,12,16)"},
      {"geodesics.max_length", "closed geodesic length cutoff (default 12)"},
      {"eisenstein.m_re", "real parts of evaluation points"},
      {"eisenstein.m_im", "imaginary parts of evaluation points"},
      {"eisenstein.t", "frequencies; s = 1/2 + it (default 0,10)"},
      {"eisenstein.tol", "series tail tolerance (default 1e-6)"},
      {"seed", "seed for the sampling checks in validate (default 1)"},
      {"threads", "worker threads; 0 uses EISENLAB_THREADS or all cores"},
      {"output.dir", "output directory (default out)"},
  };
  return schema;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::Config, key + ": " + what);
}

double to_double(const std::string& key, const std::string& v) {
  double x;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x))
    bad(key, "expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) bad(key, "empty list");
  return out;
}

void require_increasing(const std::string& key, const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) bad(key, "values must be strictly increasing");
}

void require_positive(const std::string& key, double x) {
  if (!(x > 0)) bad(key, "must be positive");
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  c.text = text;
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (!config_schema().count(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
    if (kv.count(key)) throw Error(ErrorKind::Config, "duplicate key '" + key + "'");
    if (val.empty()) bad(key, "missing value");
    kv[key] = val;
  }
  auto has = [&](const char* k) { return kv.count(k) > 0; };
  auto num = [&](const char* k, double& dst) {
    if (has(k)) dst = to_double(k, kv[k]);
  };
  auto integer = [&](const char* k, int& dst) {
    if (has(k)) dst = static_cast<int>(to_int(k, kv[k]));
  };
  auto list = [&](const char* k, std::vector<double>& dst) {
    if (has(k)) dst = to_list(k, kv[k]);
  };

  if (has("experiment")) c.experiment = kv["experiment"];
  integer("group.rank", c.rank);
  num("group.half_width", c.half_width);
  list("group.centers", c.centers);
  list("group.radii", c.radii);
  if (c.centers.size() != c.radii.size()) bad("group.radii", "must match group.centers in length");
  if (has("group.centers") && (has("group.rank") || has("group.half_width")))
    bad("group.centers", "explicit circles exclude group.rank and group.half_width");
  for (double r : c.radii) require_positive("group.radii", r);

  num("xi.theta", c.xi);
  num("bump.distance", c.bump_distance);
  num("bump.angle", c.bump_angle);
  num("bump.radius", c.bump_radius);
  if (c.bump_distance < 0) bad("bump.distance", "must be nonnegative");
  require_positive("bump.radius", c.bump_radius);

  if (has("scan.t")) {
    if (has("scan.t_min") || has("scan.t_max") || has("scan.count")) bad("scan.t", "excludes the geometric scan keys");
    c.t_grid = to_list("scan.t", kv["scan.t"]);
  } else {
    double lo = 10, hi = 80;
    int n = 13;
    num("scan.t_min", lo);
    num("scan.t_max", hi);
    integer("scan.count", n);
    require_positive("scan.t_min", lo);
    if (n < 1) bad("scan.count", "must be at least 1");
    if (n > 1 && !(hi > lo)) bad("scan.t_max", "must exceed scan.t_min");
    for (int i = 0; i < n; ++i) c.t_grid.push_back(n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1)));
  }
  require_increasing("scan.t", c.t_grid);
  for (double t : c.t_grid) require_positive("scan.t", t);

  num("series.tol", c.series_tol);
  num("kernel.tol", c.kernel_tol);
  require_positive("series.tol", c.series_tol);
  require_positive("kernel.tol", c.kernel_tol);

  num("trace.cutoff", c.trace_cutoff);
  integer("trace.word_length", c.trace_word_length);
  num("trace.tol", c.trace_tol);
  list("trace.t", c.trace_t);
  require_positive("trace.cutoff", c.trace_cutoff);
  require_positive("trace.tol", c.trace_tol);
  if (c.trace_word_length < 0 || c.trace_word_length > 16) bad("trace.word_length", "must lie in [0, 16]");
  require_increasing("trace.t", c.trace_t);
  for (double t : c.trace_t) require_positive("trace.t", t);

  integer("average.word_length", c.average_word_length);
  integer("average.control_nodes", c.average_control_nodes);
  if (c.average_word_length < 1 || c.average_word_length > 16) bad("average.word_length", "must lie in [1, 16]");
  if (c.average_control_nodes < 4) bad("average.control_nodes", "must be at least 4");

  num("delta.t_max", c.delta_t_max);
  integer("delta.max_length", c.delta_max_length);
  require_positive("delta.t_max", c.delta_t_max);
  if (c.delta_max_length < 2) bad("delta.max_length", "must be at least 2");

  list("count.T", c.count_T);
  require_increasing("count.T", c.count_T);
  for (double T : c.count_T) require_positive("count.T", T);
  num("geodesics.max_length", c.geodesics_max_length);
  require_positive("geodesics.max_length", c.geodesics_max_length);

  list("eisenstein.m_re", c.eisenstein_m_re);
  list("eisenstein.m_im", c.eisenstein_m_im);
  list("eisenstein.t", c.eisenstein_t);
  num("eisenstein.tol", c.eisenstein_tol);
  if (c.eisenstein_m_re.size() != c.eisenstein_m_im.size()) bad("eisenstein.m_im", "must match eisenstein.m_re");
  require_increasing("eisenstein.t", c.eisenstein_t);
  require_positive("eisenstein.tol", c.eisenstein_tol);

  if (has("seed")) {
    long long s = to_int("seed", kv["seed"]);
    if (s < 0) bad("seed", "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  integer("threads", c.threads);
  if (c.threads < 0) bad("threads", "must be nonnegative");
  if (has("output.dir")) c.output_dir = kv["output.dir"];
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

SchottkyGroup RunConfig::group() const {
  if (centers.empty()) return build_symmetric_schottky(rank, half_width);
  std::vector<PairingCircle> circles;
  for (size_t i = 0; i < centers.size(); ++i) circles.push_back({centers[i], std::atan(radii[i])});
  return SchottkyGroup(circles);
}

TestFunction RunConfig::bump() const {
  return {DiskPoint(std::polar(std::tanh(0.5 * bump_distance), bump_angle)), bump_radius};
}

}  // namespace eisenlab
