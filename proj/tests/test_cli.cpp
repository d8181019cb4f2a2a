#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "eisenlab/cli.hpp"
#include "eisenlab/config.hpp"
#include "eisenlab/error.hpp"
#include "eisenlab/schottky.hpp"

using namespace eisenlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "eisenlab_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& sub, const fs::path& cfg, const fs::path& out, int threads = -1) {
  std::ostringstream o, e;
  int code = run_subcommand({sub, cfg.string(), out.string(), threads}, o, e);
  return {code, o.str(), e.str()};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  fs::path p = dir / "run.cfg";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cur += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    cells.push_back(cur);
    rows.push_back(cells);
  }
  return rows;
}

// Same shape and labels; numbers agree to a relative 1e-8.
void compare_golden(const std::string& got, const std::string& want) {
  auto a = parse_csv(got), b = parse_csv(want);
  REQUIRE(a.size() == b.size());
  CHECK(a[0] == b[0]);
  for (size_t r = 1; r < a.size(); ++r) {
    REQUIRE(a[r].size() == b[r].size());
    for (size_t c = 0; c < a[r].size(); ++c) {
      char* end = nullptr;
      double x = std::strtod(b[r][c].c_str(), &end);
      if (b[r][c].empty() || *end != '\0' || std::isnan(x)) {
        CHECK(a[r][c] == b[r][c]);
        continue;
      }
      double y = std::strtod(a[r][c].c_str(), nullptr);
      INFO("row ", r, " column ", b[0][c]);
      CHECK(std::abs(y - x) <= 1e-8 * std::abs(x) + 1e-14);
    }
  }
}

const fs::path kGolden = EISENLAB_GOLDEN_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  RunConfig c = RunConfig::parse("# comment\nexperiment = equidist\ngroup.rank = 3\nscan.t = 5, 10, 20\nseed = 7\n");
  CHECK(c.rank == 3);
  CHECK(c.t_grid == std::vector<double>{5, 10, 20});
  CHECK(c.seed == 7);
  RunConfig d = RunConfig::parse("");
  CHECK(d.t_grid.size() == 13);
  CHECK(d.t_grid.front() == doctest::Approx(10));
  CHECK(d.t_grid.back() == doctest::Approx(80));

  for (const char* bad : {"bogus = 1\n", "seed = 1\nseed = 2\n", "series.tol =\n", "series.tol = -1\n",
                          "scan.t = 10, 5\n", "group.rank = two\n", "series.tol = 1e-4x\n", "just text\n",
                          "group.centers = 0, 3\ngroup.radii = 0.1, 0.1\ngroup.rank = 1\n"}) {
    INFO(bad);
    try {
      RunConfig::parse(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
  for (const auto& [key, doc] : config_schema()) CHECK(!doc.empty());
}

TEST_CASE("explicit circles") {
  RunConfig c = RunConfig::parse("group.centers = 0, 3.14159, 1.5, 4.7\ngroup.radii = 0.2, 0.2, 0.1, 0.1\n");
  SchottkyGroup G = c.group();
  CHECK(G.rank() == 2);
  CHECK(G.circles()[2].radius() == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("exit codes and error records") {
  fs::path dir = scratch("errors");
  Run r = run("validate", write_config(dir, "series.tol = 0\n"), dir / "out");
  CHECK(r.code == 2);
  auto rec = nlohmann::json::parse(r.err);
  CHECK(rec["error"] == "config");
  CHECK(rec["exit_code"] == 2);

  r = run("validate", write_config(dir, "group.centers = 0, 0.2, 2, 4\ngroup.radii = 0.3, 0.3, 0.1, 0.1\n"), dir / "out");
  CHECK(r.code == 3);

  r = run("validate", write_config(dir, "bump.distance = 2.4\nbump.radius = 0.5\n"), dir / "out");
  CHECK(r.code == 3);
  rec = nlohmann::json::parse(r.err);
  CHECK(rec["error"] == "support-violation");
  CHECK(fs::exists(dir / "out" / "error.json"));

  r = run("equidist", write_config(dir, "experiment = trace\n"), dir / "out");
  CHECK(r.code == 2);
  r = run("validate", dir / "missing.cfg", dir / "out");
  CHECK(r.code == 2);
}

TEST_CASE("validate report") {
  fs::path dir = scratch("validate");
  Run r = run("validate", write_config(dir, "experiment = validate\n"), dir);
  REQUIRE(r.code == 0);
  auto rows = parse_csv(slurp(dir / "validate.csv"));
  std::map<std::string, double> v;
  for (size_t i = 1; i < rows.size(); ++i) v[rows[i][1]] = std::stod(rows[i][2]);
  CHECK(v["rank"] == 2);
  CHECK(v["systole"] == doctest::Approx(5.1767794012185755).epsilon(1e-12));
  CHECK(v["delta"] > 0.2);
  CHECK(v["delta"] < 0.25);
  CHECK(v["bump_margin"] > 0);
  auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  for (const char* key : {"subcommand", "config_hash", "config", "version", "wall_time", "seed", "threads", "outputs"})
    CHECK(m.contains(key));
  // The manifest carries the full config, so it can be re-run.
  CHECK(m["config"] == "experiment = validate\n");
}

TEST_CASE("geodesics golden") {
  fs::path dir = scratch("geodesics");
  REQUIRE(run("geodesics", kGolden / "geodesics_6.cfg", dir).code == 0);
  auto rows = parse_csv(slurp(dir / "geodesics.csv"));
  REQUIRE(rows.size() > 1);
  double prev = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    double l = std::stod(rows[i][2]);
    CHECK(l >= prev);
    CHECK(l <= 6.0);
    prev = l;
  }
  SchottkyGroup G = build_symmetric_schottky(2, 0.15);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(displacement(G.generators()[0])).epsilon(1e-12));
}

TEST_CASE("equidist golden") {
  fs::path dir = scratch("equidist");
  REQUIRE(run("equidist", kGolden / "equidist_small.cfg", dir).code == 0);
  compare_golden(slurp(dir / "equidist.csv"), slurp(kGolden / "equidist_small.csv"));
}

TEST_CASE("trace golden") {
  fs::path dir = scratch("trace");
  REQUIRE(run("trace", kGolden / "trace_t40.cfg", dir).code == 0);
  compare_golden(slurp(dir / "trace.csv"), slurp(kGolden / "trace_t40.csv"));
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  fs::path dir = scratch("determinism");
  fs::path cfg = write_config(dir, "experiment = equidist\nbump.radius = 0.5\nscan.t = 10, 15\nseed = 3\nseries.tol = 1e-3\n");
  REQUIRE(run("equidist", cfg, dir / "a", 1).code == 0);
  REQUIRE(run("equidist", cfg, dir / "b", 1).code == 0);
  REQUIRE(run("equidist", cfg, dir / "c", 2).code == 0);
  std::string a = slurp(dir / "a" / "equidist.csv");
  CHECK(a == slurp(dir / "b" / "equidist.csv"));
  CHECK(a == slurp(dir / "c" / "equidist.csv"));
  for (const char* sub : {"validate", "eisenstein", "count"}) {
    fs::path c2 = write_config(dir, std::string("experiment = ") + sub + "\n");
    REQUIRE(run(sub, c2, dir / (std::string(sub) + "1")).code == 0);
    REQUIRE(run(sub, c2, dir / (std::string(sub) + "2"), 2).code == 0);
    CHECK(slurp(dir / (std::string(sub) + "1") / (std::string(sub) + ".csv")) ==
          slurp(dir / (std::string(sub) + "2") / (std::string(sub) + ".csv")));
  }
}

}
