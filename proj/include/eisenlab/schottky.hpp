#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eisenlab/geom.hpp"

namespace eisenlab {

// Circle orthogonal to S^1 given by the angle of its center and its angular half-width.
struct PairingCircle {
  double angle = 0;
  double half_width = 0;

  cplx center() const { return std::polar(1.0 / std::cos(half_width), angle); }
  double radius() const { return std::tan(half_width); }
  bool contains(cplx z) const { return std::abs(z - center()) <= radius(); }
};

// Letters are 0..2k-1: letter 2i is g_i, letter 2i+1 is g_i^{-1}.
// Letter j maps the exterior of circle j onto the interior of circle j^1.
inline int inverse_letter(int j) { return j ^ 1; }

class SchottkyGroup {
 public:
  SchottkyGroup() = default;
  // Circles 2i and 2i+1 are paired and must share a half-width.
  // allow_elementary admits rank 0 and 1 for tests.
  SchottkyGroup(std::vector<PairingCircle> circles, bool allow_elementary = false);

  int rank() const { return static_cast<int>(circles_.size()) / 2; }
  int letters() const { return static_cast<int>(circles_.size()); }
  const std::vector<PairingCircle>& circles() const { return circles_; }
  const DiskIsometry& letter(int j) const { return letter_mats_[j]; }
  const std::vector<DiskIsometry>& generators() const { return gens_; }
  bool valid() const { return !circles_.empty() || rank() == 0; }

  // Smallest hyperbolic distance between two distinct pairing geodesics.
  double min_wall_separation() const { return wall_sep_; }
  // Hyperbolic distance from m to the nearest pairing geodesic; negative inside a disk.
  double domain_margin(DiskPoint m) const;

  std::string serialize() const;
  static SchottkyGroup deserialize(const std::string& text);

 private:
  std::vector<PairingCircle> circles_;
  std::vector<DiskIsometry> gens_;
  std::vector<DiskIsometry> letter_mats_;
  double wall_sep_ = 0;
};

SchottkyGroup build_symmetric_schottky(int k, double half_width, bool allow_elementary = false);

struct Word {
  std::vector<std::int8_t> letters;
  DiskIsometry g;
  double displacement = 0;
};

struct EnumerationPolicy {
  enum Kind { MaxLength, MaxDisplacement } kind = MaxLength;
  int max_length = 0;
  double max_displacement = 0;
  std::size_t cap = 10000000;

  static EnumerationPolicy length(int L) { return {MaxLength, L, 0, 10000000}; }
  static EnumerationPolicy displacement(double T) { return {MaxDisplacement, 0, T, 10000000}; }
};

// Breadth-first over reduced words, identity first; lengths nondecreasing.
void for_each_word(const SchottkyGroup& G, const EnumerationPolicy& policy,
                   const std::function<void(const Word&)>& visit);
std::vector<Word> enumerate_words(const SchottkyGroup& G, const EnumerationPolicy& policy);

std::size_t orbit_count(const SchottkyGroup& G, double T);

struct DeltaEstimate {
  enum Method { CountingRegression, PoincareBisection } method;
  double value;
  double uncertainty;
};

struct DeltaConfig {
  double t_max = 48.0;
  int max_length = 11;
  double bisection_tol = 1e-3;
  std::size_t cap = 10000000;
};

struct DeltaReport {
  DeltaEstimate counting;
  DeltaEstimate bisection;
  // Value and uncertainty to use downstream (bisection value, combined uncertainty).
  double value;
  double uncertainty;
};

DeltaReport estimate_delta(const SchottkyGroup& G, const DeltaConfig& cfg = {});

struct ClosedGeodesic {
  std::vector<std::int8_t> cyclic_word;
  double length = 0;
  bool primitive = true;
  std::vector<std::int8_t> multiplicity_base;
  int power = 1;
  DiskIsometry g;
};

std::vector<ClosedGeodesic> enumerate_geodesics(const SchottkyGroup& G, double max_length,
                                                std::size_t cap = 10000000);

bool point_in_fundamental_domain(const SchottkyGroup& G, DiskPoint m);

// Maps m into the closed fundamental domain. Returns the reduced point and the
// word w (as an isometry) with reduced = w(m).
struct Reduction {
  DiskPoint point;
  DiskIsometry w;
  int steps = 0;
};
Reduction reduce_to_domain(const SchottkyGroup& G, DiskPoint m, int max_steps = 200);

DiskIsometry word_matrix(const SchottkyGroup& G, const std::vector<std::int8_t>& letters);
std::string word_string(const std::vector<std::int8_t>& letters);

}  // namespace eisenlab
