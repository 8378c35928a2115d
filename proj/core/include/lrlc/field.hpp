#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lrlc/lattice.hpp"

namespace lrlc {

// Dense real field on a full box, one entry per site in site_index order.
struct LatticeField {
  BoxSpec box;
  std::vector<double> values;

  LatticeField() = default;
  explicit LatticeField(const BoxSpec& b, double fill = 0.0)
      : box(b), values(b.volume(), fill) {}

  double& at(std::span<const int> x) { return values[site_index(box, x)]; }
  double at(std::span<const int> x) const { return values[site_index(box, x)]; }
  double at_origin() const { return values[(values.size() - 1) / 2]; }
  double sum() const;
  double max_abs() const;
  double max_value() const;
};

// Dense real field on the non-negative octant [0..M]^d of a box, standing for
// a full-box field that is even in every coordinate. All spectral machinery
// runs on this representation; at d=4, M=128 it is 16x smaller than the box.
struct SymField {
  BoxSpec box;
  std::vector<double> values; // octant_index order

  SymField() = default;
  explicit SymField(const BoxSpec& b, double fill = 0.0)
      : box(b), values(b.octant_volume(), fill) {}

  double& at_abs(std::span<const int> absx) { return values[octant_index(box, absx)]; }
  double at_abs(std::span<const int> absx) const { return values[octant_index(box, absx)]; }
  double at(std::span<const int> x) const; // any signs; folds to the octant
  double at_origin() const { return values[0]; }

  // Sum / extrema over the FULL box the octant stands for.
  double sum() const;
  double max_abs() const;
  double max_value() const;
  double min_value() const;

  LatticeField to_full() const;
};

// Folds a full-box field onto the octant, averaging each sign-flip orbit.
// max_defect reports max |f(x) - orbit mean| seen (0 for exactly even fields).
SymField fold_to_octant(const LatticeField& f, double* max_defect = nullptr);

// Streaming iteration over an octant: calls fn(flat_index, coords, multiplicity).
template <typename Fn>
void for_each_octant(const BoxSpec& box, Fn&& fn) {
  const std::size_t n = box.octant_volume();
  std::vector<int> c(box.d, 0);
  double mult = 1.0; // tracks 2^(#nonzero coords) incrementally
  for (std::size_t i = 0; i < n; ++i) {
    fn(i, std::span<const int>(c), mult);
    for (int j = box.d - 1; j >= 0; --j) {
      if (c[j] == 0) mult *= 2.0;
      if (++c[j] <= box.M) break;
      c[j] = 0;
      mult /= 2.0;
      if (j == 0) return;
    }
  }
}

} // namespace lrlc
