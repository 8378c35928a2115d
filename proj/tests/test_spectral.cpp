#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrlc/kernels.hpp"
#include "lrlc/spectral.hpp"

using namespace lrlc;

namespace {

// Independent Lanczos evaluation of Gamma (g = 7, n = 9), the oracle for
// compute_gamma's Gamma-function expression.
double lanczos_gamma(double z) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059, 12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (z < 0.5) return pi / (std::sin(pi * z) * lanczos_gamma(1.0 - z));
  z -= 1.0;
  double x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

SymField nearest_neighbor_kernel(int d, int M) {
  SymField D(BoxSpec{d, M, false});
  std::vector<int> e(d, 0);
  for (int j = 0; j < d; ++j) {
    e[j] = 1;
    D.at_abs(e) = 1.0 / (2.0 * d); // each of the 2d unit steps
    e[j] = 0;
  }
  return D;
}

} // namespace

TEST_CASE("compute_gamma closed-form values") {
  const double pi = std::numbers::pi;
  CHECK(compute_gamma(4, 2.0) == doctest::Approx(1.0 / (4 * pi * pi)).epsilon(1e-13));
  CHECK(compute_gamma(3, 1.0) == doctest::Approx(1.0 / (2 * pi * pi)).epsilon(1e-13));
  CHECK(compute_gamma(3, 5.0) == doctest::Approx(1.0 / (4 * pi)).epsilon(1e-13));
  CHECK_THROWS_AS(compute_gamma(2, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_gamma(1, 1.5), std::invalid_argument);
}

TEST_CASE("compute_gamma against the Lanczos oracle") {
  const double pi = std::numbers::pi;
  for (auto [d, alpha] : {std::pair{3, 1.3}, {4, 2.0}, {5, 0.7}, {6, 2.0}, {4, 3.7}, {3, 1.99}}) {
    const double a2 = std::min(alpha, 2.0);
    const double want = lanczos_gamma(0.5 * (d - a2)) /
                        (std::pow(2.0, a2) * std::pow(pi, 0.5 * d) * lanczos_gamma(0.5 * a2));
    CHECK(compute_gamma(d, alpha) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("fourier transform of a kernel: normalization and realness") {
  LongRangeParams p{2, 2.0, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 6, false});
  SpectralField Dh = fourier_transform(D.to_full());
  CHECK(Dh.at_zero().real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(Dh.max_imag_abs() == 0.0); // symmetric input: imaginary parts discarded
  double mx = 0.0;
  for (auto& v : Dh.values) mx = std::max(mx, std::abs(v.real()));
  CHECK(mx <= 1.0 + 1e-13);
}

TEST_CASE("estimate_v: nearest-neighbor surrogate plateaus at 1/(2d)") {
  // exact transform is (cos k1 + cos k2)/2, so (1-Dhat)/|k|^2 -> 1/4 at d=2
  SymField D = nearest_neighbor_kernel(2, 48);
  LongRangeParams p{2, 10.0, 1.0, KernelVariant::DirectPowerLaw}; // alpha /\ 2 = 2
  AsymptoticConstants est = estimate_v(D, p);
  CHECK(est.v_alpha == doctest::Approx(0.25).epsilon(0.02));
  CHECK(est.pass);
}

TEST_CASE("estimate_v: refinement stability for the alpha=2 kernel") {
  LongRangeParams p{2, 2.0, 3.0, KernelVariant::DirectPowerLaw};
  auto [D1, t1] = build_power_law_kernel(p, BoxSpec{2, 48, false});
  auto [D2, t2] = build_power_law_kernel(p, BoxSpec{2, 96, false});
  AsymptoticConstants e1 = estimate_v(D1, p);
  AsymptoticConstants e2 = estimate_v(D2, p);
  CHECK(e1.v_alpha > 0.0);
  CHECK(e2.v_alpha > 0.0);
  const double tol = std::max(0.10, 2.0 * (e1.fit_residual + e2.fit_residual));
  CHECK(std::abs(e1.v_alpha / e2.v_alpha - 1.0) < tol);
}

TEST_CASE("estimate_v rejects boxes that cannot resolve below 1/L") {
  LongRangeParams p{1, 2.0, 8.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{1, 10, false});
  CHECK_THROWS_AS(estimate_v(D, p), std::invalid_argument);
}

TEST_CASE("hatD audit passes for a healthy kernel and fails for corrupt ones") {
  LongRangeParams p{2, 2.0, 3.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 32, false});
  AssumptionAudit good = audit_assumption_hatD(D, p);
  CHECK(good.pass);
  CHECK(good.delta_hat > 0.0);
  CHECK(good.small_k_points > 0);
  CHECK(good.small_k_ratio_min > 0.0);

  // degenerate kernel D = delta has Dhat == 1 everywhere
  SymField delta(BoxSpec{2, 32, false});
  delta.values[0] = 1.0;
  AssumptionAudit bad = audit_assumption_hatD(delta, p);
  CHECK_FALSE(bad.pass);

  // nearest-neighbor kernel reaches 1 - Dhat = 2 at the zone corner
  SymField nn = nearest_neighbor_kernel(2, 32);
  AssumptionAudit nnrep = audit_assumption_hatD(nn, LongRangeParams{2, 2.0, 1.0});
  CHECK_FALSE(nnrep.pass);
}

TEST_CASE("delta_m: non-negative, rejections, and L-decrease") {
  LongRangeParams p{4, 2.0, 3.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{4, 12, false});
  const double d2 = compute_delta_m(D, 2, p);
  CHECK(d2 >= 0.0);
  CHECK_THROWS_AS(compute_delta_m(D, 4, p), std::invalid_argument);

  SymField delta(BoxSpec{2, 8, false});
  delta.values[0] = 1.0;
  CHECK_THROWS_AS(compute_delta_m(delta, 2, LongRangeParams{2, 2.0, 1.0}),
                  std::invalid_argument);

  LongRangeParams p6{4, 2.0, 6.0, KernelVariant::DirectPowerLaw};
  auto [D6, t6] = build_power_law_kernel(p6, BoxSpec{4, 12, false});
  const double d2_L6 = compute_delta_m(D6, 2, p6);
  CHECK(d2_L6 < d2); // delta_m = O(L^-d) decreases in L
  CHECK(d2 / d2_L6 > 2.0);
}
