#include "lrlc/numerics.hpp"

#include <gsl/gsl_sf_dilog.h>

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrlc {

namespace {

double zeta(double s) {
  if (std::abs(s - 1.0) < 1e-12) throw std::domain_error("zeta pole at s=1");
  return std::riemann_zeta(s);
}

// Direct series; fine whenever |u| is not too close to 1.
double polylog_series(double s, double u, std::uint64_t t_max) {
  double sum = 0.0, up = 1.0;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    up *= u;
    const double term = up * std::pow(static_cast<double>(t), -s);
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && t > 8) break;
  }
  return sum;
}

// Expansion around u = 1 for non-integer s > 1:
//   Li_s(e^-eps) = Gamma(1-s) eps^{s-1} + sum_j zeta(s-j) (-eps)^j / j!
double polylog_near_one(double s, double u) {
  const double eps = -std::log(u);
  double sum = std::tgamma(1.0 - s) * std::pow(eps, s - 1.0);
  double epj = 1.0; // (-eps)^j / j!
  for (int j = 0; j <= 16; ++j) {
    double sj = s - j;
    if (std::abs(sj - 1.0) < 1e-9) sj = 1.0 + 1e-9; // dodge the zeta pole
    sum += zeta(sj) * epj;
    epj *= -eps / (j + 1);
    if (std::abs(epj) < 1e-18) break;
  }
  return sum;
}

} // namespace

double polylog(double s, double u) {
  if (s <= 1.0) throw std::domain_error("polylog: requires s > 1");
  if (u < -1.0 || u > 1.0) throw std::domain_error("polylog: requires |u| <= 1");
  if (u == 1.0) return zeta(s);
  if (u >= 0.99) {
    if (std::abs(s - 2.0) < 1e-12) return gsl_sf_dilog(u);
    const double fs = s - std::floor(s);
    if (fs < 1e-9 || fs > 1.0 - 1e-9)
      return polylog_series(s, u, 2'000'000); // integer s: series, slow but rare
    return polylog_near_one(s, u);
  }
  return polylog_series(s, u, 4'000'000);
}

double polylog_partial(double s, double u, std::uint64_t t_max) {
  if (s <= 1.0) throw std::domain_error("polylog_partial: requires s > 1");
  if (u < -1.0 || u > 1.0) throw std::domain_error("polylog_partial: requires |u| <= 1");
  if (t_max == 0) return 0.0;
  if (u == 1.0) {
    if (t_max <= 200'000) {
      double sum = 0.0;
      for (std::uint64_t t = t_max; t >= 1; --t) sum += std::pow(static_cast<double>(t), -s);
      return sum;
    }
    // zeta(s) minus an Euler-Maclaurin tail estimate of sum_{t>t_max} t^-s.
    const double T = static_cast<double>(t_max);
    const double tail = std::pow(T, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(T, -s);
    return zeta(s) - tail;
  }
  // Direct sum once it is cheap or the geometric factor converges first.
  if (t_max <= 8192 || u <= 0.99) return polylog_series(s, u, t_max);
  // Large t_max with u close to 1: the truncated tail is O(t_max^{1-s});
  // approximate through the full polylog minus a damped tail estimate.
  const double T = static_cast<double>(t_max);
  const double tail = std::pow(u, T + 1.0) * std::pow(T, 1.0 - s) / (s - 1.0);
  return polylog(s, u) - tail;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}
} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double angular_kernel(int d, double z) {
  if (z < 1e-8) {
    // Gamma(d/2)(2/z)^{nu} J_nu(z) = 1 - z^2/(2d) + O(z^4)
    return 1.0 - z * z / (2.0 * d);
  }
  switch (d) {
    case 1: return std::cos(z);
    case 2: return std::cyl_bessel_j(0.0, z);
    case 3: return std::sin(z) / z;
    case 4: return 2.0 * std::cyl_bessel_j(1.0, z) / z;
    case 5: return 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z);
    case 6: return 8.0 * std::cyl_bessel_j(2.0, z) / (z * z);
    default: {
      const double nu = 0.5 * d - 1.0;
      return std::tgamma(0.5 * d) * std::pow(2.0 / z, nu) * std::cyl_bessel_j(nu, z);
    }
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& w : s) w = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
  const std::uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

double Rng::next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

long Rng::next_binomial(long n, double p) {
  if (p <= 0.0 || n <= 0) return 0;
  if (p >= 1.0) return n;
  // Geometric skipping: expected cost O(np + 1), exact and portable.
  const double log1mp = std::log1p(-p);
  long count = 0;
  long i = -1;
  while (true) {
    const double u = 1.0 - next_unit(); // in (0, 1]
    i += 1 + static_cast<long>(std::floor(std::log(u) / log1mp));
    if (i >= n) break;
    ++count;
  }
  return count;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

} // namespace lrlc
