#include "lrlc/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lrlc {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;

std::size_t checked_pow(std::size_t base, int exp) {
  std::size_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && v > std::numeric_limits<std::size_t>::max() / base / 16)
      throw std::overflow_error("box site count overflows addressable range");
    v *= base;
  }
  return v;
}
} // namespace

std::size_t BoxSpec::volume() const {
  if (d < 1) throw std::invalid_argument("BoxSpec: d must be positive");
  if (M < 0) throw std::invalid_argument("BoxSpec: M must be non-negative");
  return checked_pow(static_cast<std::size_t>(side()), d);
}

std::size_t BoxSpec::octant_volume() const {
  if (d < 1) throw std::invalid_argument("BoxSpec: d must be positive");
  if (M < 0) throw std::invalid_argument("BoxSpec: M must be non-negative");
  return checked_pow(static_cast<std::size_t>(M) + 1, d);
}

bool BoxSpec::contains(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != d) return false;
  for (int c : x)
    if (c < -M || c > M) return false;
  return true;
}

std::size_t site_index(const BoxSpec& box, std::span<const int> x) {
  std::size_t idx = 0;
  const std::size_t n = box.side();
  for (int i = 0; i < box.d; ++i) idx = idx * n + static_cast<std::size_t>(x[i] + box.M);
  return idx;
}

void site_coords(const BoxSpec& box, std::size_t idx, std::span<int> out) {
  const std::size_t n = box.side();
  for (int i = box.d - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % n) - box.M;
    idx /= n;
  }
}

std::vector<Site> enumerate_box(const BoxSpec& box) {
  const std::size_t v = box.volume();
  std::vector<Site> sites(v, Site(box.d));
  for (std::size_t i = 0; i < v; ++i) site_coords(box, i, sites[i]);
  return sites;
}

std::size_t octant_index(const BoxSpec& box, std::span<const int> absx) {
  std::size_t idx = 0;
  const std::size_t n = static_cast<std::size_t>(box.M) + 1;
  for (int i = 0; i < box.d; ++i) idx = idx * n + static_cast<std::size_t>(absx[i]);
  return idx;
}

void octant_coords(const BoxSpec& box, std::size_t idx, std::span<int> out) {
  const std::size_t n = static_cast<std::size_t>(box.M) + 1;
  for (int i = box.d - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % n);
    idx /= n;
  }
}

double octant_multiplicity(std::span<const int> absx) {
  double m = 1.0;
  for (int c : absx)
    if (c != 0) m *= 2.0;
  return m;
}

double euclid_norm(std::span<const int> x) {
  double s = 0.0;
  for (int c : x) s += static_cast<double>(c) * c;
  return std::sqrt(s);
}

double euclid_norm_scaled(std::span<const int> x, double inv_scale) {
  return euclid_norm(x) * inv_scale;
}

double reg_norm_rho(double rho, double r) {
  if (r < 1.0) throw std::invalid_argument("reg_norm: cutoff r must be >= 1");
  return kHalfPi * std::max(rho, r);
}

double reg_norm(std::span<const int> x, double r) {
  return reg_norm_rho(euclid_norm(x), r);
}

double log_reg_norm_rho(double rho, double L) {
  if (L < 1.0) throw std::invalid_argument("log_reg_norm: L must be >= 1");
  return std::log(kHalfPi * std::max(rho / L, 1.0));
}

double log_reg_norm(std::span<const int> x, double L) {
  return log_reg_norm_rho(euclid_norm(x), L);
}

RegNorm::RegNorm(double r_) : r(r_) {
  if (r < 1.0) throw std::invalid_argument("RegNorm: cutoff r must be >= 1");
}

} // namespace lrlc
