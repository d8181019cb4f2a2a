#include "eisenlab/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eisenlab/error.hpp"

namespace eisenlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ExperimentTable::ExperimentTable(std::vector<std::string> meta_columns) : meta_(std::move(meta_columns)) {
  for (const auto& m : meta_)
    if (m == "t" || m == "name" || m == "value" || m == "error")
      throw std::logic_error("metadata column '" + m + "' shadows a base column");
}

void ExperimentTable::add(std::optional<double> t, const std::string& name, double value, double error,
                          std::vector<std::string> meta) {
  if (meta.size() != meta_.size()) throw std::logic_error("table row has the wrong number of columns");
  if (t) {
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it)
      if (it->name == name && it->t) {
        if (*t < *it->t) throw std::logic_error("t must be nondecreasing within a scan");
        break;
      }
  }
  rows_.push_back({t, name, value, error, std::move(meta)});
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string ExperimentTable::to_csv() const {
  std::ostringstream os;
  os << "t,name,value,error";
  for (const auto& m : meta_) os << ',' << quote(m);
  os << '\n';
  for (const auto& r : rows_) {
    os << (r.t ? format_double(*r.t) : "") << ',' << quote(r.name) << ',' << format_double(r.value) << ','
       << format_double(r.error);
    for (const auto& m : r.meta) os << ',' << quote(m);
    os << '\n';
  }
  return os.str();
}

void ExperimentTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path);
  f << to_csv();
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace eisenlab
