#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eisenlab/geom.hpp"
#include "eisenlab/grid.hpp"
#include "eisenlab/schottky.hpp"

namespace eisenlab {

// Flat `key = value` text; '#' starts a comment; lists are comma separated.
// Every key is optional and listed in config_schema().
struct RunConfig {
  std::string text;
  std::string experiment;

  // Symmetric builder unless centers/radii are given.
  int rank = 2;
  double half_width = 0.15;
  std::vector<double> centers;
  std::vector<double> radii;

  double xi = 0.7;

  // Bump center in geodesic polar coordinates about o.
  double bump_distance = 0.0;
  double bump_angle = 0.0;
  double bump_radius = 1.0;

  std::vector<double> t_grid;  // scan.t, or geometric from scan.t_min/t_max/count
  double series_tol = 1e-4;
  double kernel_tol = 1e-10;

  double trace_cutoff = 20.0;
  int trace_word_length = 0;
  double trace_tol = 1e-2;
  std::vector<double> trace_t = {30, 40, 50};

  int average_word_length = 6;
  int average_control_nodes = 16;

  double delta_t_max = 48.0;
  int delta_max_length = 11;

  std::vector<double> count_T = {4, 8, 12, 16};
  double geodesics_max_length = 12.0;

  std::vector<double> eisenstein_m_re = {0.0};
  std::vector<double> eisenstein_m_im = {0.0};
  std::vector<double> eisenstein_t = {0.0, 10.0};
  double eisenstein_tol = 1e-6;

  std::uint64_t seed = 1;
  int threads = 0;
  std::string output_dir = "out";

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  SchottkyGroup group() const;
  TestFunction bump() const;
};

// key -> one-line description.
const std::map<std::string, std::string>& config_schema();

}  // namespace eisenlab
