#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace lrlc {

// Li_s(u) = sum_{t>=1} u^t t^{-s} for s > 1 and u in [-1, 1].
double polylog(double s, double u);

// sum_{t=1}^{t_max} u^t t^{-s}; the t_max = infinity case is polylog().
double polylog_partial(double s, double u, std::uint64_t t_max);

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 48);

// Angular average of e^{-i k.x} over the sphere |k| = 1 in R^d, as a function
// of z = |k||x|: Gamma(d/2) (2/z)^{d/2-1} J_{d/2-1}(z), with value 1 at z = 0.
double angular_kernel(int d, double z);

// Surface area of the unit sphere S^{d-1}.
double sphere_area(int d);

// Deterministic 64-bit mixing (splitmix64); used to derive per-sample seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

// xoshiro256** PRNG; fully specified so streams are reproducible everywhere.
struct Rng {
  std::uint64_t s[4];
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  double next_unit(); // uniform in [0, 1)
  // Binomial(n, p) via inversion/counting; deterministic given the stream.
  long next_binomial(long n, double p);
};

// FNV-1a over bytes; content hashes for cache keys and output stamps.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 1469598103934665603ULL);

// Shortest round-trip decimal formatting of a double (via std::to_chars).
std::string format_double(double v);

} // namespace lrlc
