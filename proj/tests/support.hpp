#pragma once

#include <cmath>
#include <random>

#include "eisenlab/geom.hpp"

namespace testing {

using eisenlab::cplx;
using eisenlab::kPi;

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline eisenlab::DiskPoint random_point(double rmax = 0.9) {
  return eisenlab::DiskPoint(std::polar(rmax * std::sqrt(uniform(0, 1)), uniform(0, 2 * kPi)));
}

inline eisenlab::BoundaryPoint random_boundary() { return eisenlab::BoundaryPoint(uniform(0, 2 * kPi)); }

inline eisenlab::DiskIsometry random_isometry(double dmax = 4.0) {
  using eisenlab::DiskIsometry;
  return DiskIsometry::translation(uniform(0, dmax), uniform(0, 2 * kPi)) * DiskIsometry::rotation(uniform(0, 2 * kPi));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
