#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lrlc {

using Site = std::vector<int>;

// Finite window [-M, M]^d of Z^d with odd side 2M+1, origin at the center.
// When torus is set, convolutions wrap around the box boundary.
struct BoxSpec {
  int d = 1;
  int M = 0;
  bool torus = false;

  int side() const { return 2 * M + 1; }
  std::size_t volume() const;        // (2M+1)^d, throws if it overflows
  std::size_t octant_volume() const; // (M+1)^d

  bool contains(std::span<const int> x) const;
  bool operator==(const BoxSpec&) const = default;
};

// Full-box indexing: sites ordered lexicographically with the FIRST
// coordinate varying slowest, coordinates running -M..M. The origin sits at
// index (volume-1)/2. This ordering is part of the cache file contract.
std::size_t site_index(const BoxSpec& box, std::span<const int> x);
void site_coords(const BoxSpec& box, std::size_t idx, std::span<int> out);
std::vector<Site> enumerate_box(const BoxSpec& box);

// Octant indexing: coordinates 0..M, first coordinate slowest. A full-box
// site maps to the octant cell of its absolute values; the orbit size of an
// octant cell is 2^(#nonzero coordinates).
std::size_t octant_index(const BoxSpec& box, std::span<const int> absx);
void octant_coords(const BoxSpec& box, std::size_t idx, std::span<int> out);
double octant_multiplicity(std::span<const int> absx);

double euclid_norm(std::span<const int> x);
double euclid_norm_scaled(std::span<const int> x, double inv_scale);

// <x>_r = (pi/2) max(|x|, r), r >= 1.  Strictly positive everywhere.
double reg_norm(std::span<const int> x, double r);
double reg_norm_rho(double rho, double r); // same, from a precomputed |x|

// log <x/L>_1 = log((pi/2) max(|x|/L, 1)) >= log(pi/2) > 0.
double log_reg_norm(std::span<const int> x, double L);
double log_reg_norm_rho(double rho, double L);

// Evaluation of <.>_r as a reusable object (r is the lower cutoff).
struct RegNorm {
  double r = 1.0;
  explicit RegNorm(double r_);
  double operator()(std::span<const int> x) const { return reg_norm(x, r); }
};

} // namespace lrlc
