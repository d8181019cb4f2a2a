#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eisenlab {

// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

// CSV table: t, name, value, error, then experiment-specific columns.
class ExperimentTable {
 public:
  struct Row {
    std::optional<double> t;
    std::string name;
    double value;
    double error;
    std::vector<std::string> meta;
  };

  explicit ExperimentTable(std::vector<std::string> meta_columns = {});

  // Throws if t decreases within rows of the same name or the meta width is wrong.
  void add(std::optional<double> t, const std::string& name, double value, double error,
           std::vector<std::string> meta = {});

  const std::vector<std::string>& meta_columns() const { return meta_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::string to_csv() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> meta_;
  std::vector<Row> rows_;
};

inline std::string cell(double x) { return format_double(x); }
inline std::string cell(long long x) { return std::to_string(x); }
inline std::string cell(int x) { return std::to_string(x); }
inline std::string cell(std::size_t x) { return std::to_string(x); }
inline std::string cell(const std::string& s) { return s; }

// 64-bit FNV-1a, hex encoded.
std::string content_hash(const std::string& text);

}  // namespace eisenlab
