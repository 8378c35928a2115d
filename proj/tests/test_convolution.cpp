#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lrlc/convolution.hpp"
#include "lrlc/transform.hpp"

using namespace lrlc;

namespace {

SymField nn_kernel(int d, int M) {
  SymField D(BoxSpec{d, M, false});
  std::vector<int> e(d, 0);
  for (int j = 0; j < d; ++j) {
    e[j] = 1;
    D.at_abs(e) = 1.0 / (2.0 * d);
    e[j] = 0;
  }
  return D;
}

} // namespace

TEST_CASE("n_step base cases: delta at n=0, D at n=1") {
  LongRangeParams p{2, 2.0, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 5, false});
  ConvolutionPlan plan{BoxSpec{2, 5, false}, 6, ConvMethod::Spectral};
  NStepResult r0 = n_step(D, 0, plan);
  CHECK(r0.field.at_origin() == 1.0);
  CHECK(r0.field.sum() == doctest::Approx(1.0));
  NStepResult r1 = n_step(D, 1, plan);
  for (std::size_t i = 0; i < D.values.size(); ++i)
    CHECK(r1.field.values[i] == doctest::Approx(D.values[i]).epsilon(1e-12));
}

TEST_CASE("two-step convolution matches the direct double sum on a tiny box") {
  LongRangeParams p{1, 1.5, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{1, 2, false});
  ConvolutionPlan plan{BoxSpec{1, 2, false}, 4, ConvMethod::Spectral};
  NStepResult r2 = n_step(D, 2, plan);
  LatticeField Dfull = D.to_full();
  // brute force: sum_y D(y) D(x-y) over the 5-site box
  for (int x = 0; x <= 2; ++x) {
    double want = 0.0;
    for (int y = -2; y <= 2; ++y) {
      const int z = x - y;
      if (z < -2 || z > 2) continue;
      int yy[] = {y}, zz[] = {z};
      want += Dfull.at(yy) * Dfull.at(zz);
    }
    int xx[] = {x};
    CHECK(r2.field.at_abs(xx) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("semigroup property on the torus") {
  LongRangeParams p{2, 2.0, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 6, false});
  // reporting box = padded box: the fields are the full circular powers
  ConvolutionPlan plan{BoxSpec{2, 20, true}, 0, ConvMethod::Spectral};
  SpectralPower sp(D, plan);
  NStepResult r2 = sp.power(2), r3 = sp.power(3), r5 = sp.power(5);
  SymField ab = circ_convolve(r2.field, r3.field);
  for (std::size_t i = 0; i < ab.values.size(); ++i)
    CHECK(ab.values[i] == doctest::Approx(r5.field.values[i]).epsilon(1e-10));
}

TEST_CASE("mass conservation and monotone leakage") {
  LongRangeParams p{2, 1.5, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 8, false});
  ConvolutionPlan plan{BoxSpec{2, 8, false}, 8, ConvMethod::Spectral};
  SpectralPower sp(D, plan);
  double prev_leak = 0.0;
  for (int n = 1; n <= 6; ++n) {
    NStepResult r = sp.power(n);
    CHECK(r.mass == doctest::Approx(1.0 - r.leakage).epsilon(1e-12));
    CHECK(r.leakage >= prev_leak - 1e-12);
    prev_leak = r.leakage;
  }
}

TEST_CASE("sup norm of D^{*n} is nonincreasing") {
  LongRangeParams p{2, 2.0, 2.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 10, false});
  ConvolutionPlan plan{BoxSpec{2, 10, false}, 12, ConvMethod::Spectral};
  SpectralPower sp(D, plan);
  double prev = sp.power(1).field.max_value();
  for (int n = 2; n <= 8; ++n) {
    const double cur = sp.power(n).field.max_value();
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("spectral and direct methods agree to 1e-10") {
  LongRangeParams p{2, 2.0, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 4, false});
  ConvolutionPlan sp{BoxSpec{2, 4, false}, 9, ConvMethod::Spectral};
  ConvolutionPlan dp{BoxSpec{2, 4, false}, 9, ConvMethod::Direct};
  NStepResult rs = n_step(D, 3, sp);
  NStepResult rd = n_step(D, 3, dp);
  for (std::size_t i = 0; i < rs.field.values.size(); ++i)
    CHECK(rs.field.values[i] == doctest::Approx(rd.field.values[i]).epsilon(1e-10));
}

TEST_CASE("excessive n is rejected through the leakage gate") {
  LongRangeParams p{1, 1.2, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{1, 6, false});
  ConvolutionPlan plan{BoxSpec{1, 6, false}, 0, ConvMethod::Spectral};
  SpectralPower sp(D, plan);
  bool rejected = false;
  for (int n = 1; n <= 4000 && !rejected; n *= 4) {
    try {
      sp.power(n);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
  }
  CHECK(rejected);
}

TEST_CASE("Dn audit passes the long-range kernel and fails the NN control") {
  LongRangeParams p{2, 2.0, 2.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 24, false});
  ConvolutionPlan plan{BoxSpec{2, 24, false}, suggest_padding(D, 16), ConvMethod::Spectral};
  DnAudit good = audit_assumption_Dn(D, p, 16, plan);
  CHECK(good.n_reached == 16);
  CHECK(good.pass);

  // nearest-neighbor walk: ||D^{*n}||_inf ~ n^{-d/2} with no log, so the
  // alpha=2 sup envelope (n log(pi n/2))^{d/2} makes the constant grow
  SymField nn = nn_kernel(2, 24);
  LongRangeParams pl{2, 2.0, 1.0, KernelVariant::DirectPowerLaw};
  ConvolutionPlan nplan{BoxSpec{2, 24, false}, 16, ConvMethod::Spectral};
  DnAudit bad = audit_assumption_Dn(nn, pl, 16, nplan);
  CHECK_FALSE(bad.pass);
  CHECK(bad.sup_trend > 1.10);
}

TEST_CASE("derivative ratio: degenerate and symmetric cases") {
  LongRangeParams p{2, 1.5, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 12, false});
  ConvolutionPlan plan{BoxSpec{2, 12, false}, 12, ConvMethod::Spectral};
  NStepResult r2 = n_step(D, 2, plan);

  int x[] = {6, 0}, o[] = {0, 0};
  CHECK(derivative_ratio(r2.field, 2, p, x, o) == 0.0);

  int y[] = {1, 1};
  int xm[] = {-6, 0};
  CHECK(derivative_ratio(r2.field, 2, p, x, y) ==
        doctest::Approx(derivative_ratio(r2.field, 2, p, xm, y)).epsilon(1e-12));

  int ybad[] = {4, 0};
  CHECK_THROWS_AS(derivative_ratio(r2.field, 2, p, x, ybad), std::invalid_argument);
}

TEST_CASE("derivative audit passes a long-range alpha!=2 kernel") {
  LongRangeParams p{2, 1.5, 2.0, KernelVariant::CompoundZeta};
  p.t_max = 400;
  auto [D, tail] = build_compound_zeta_kernel(p, BoxSpec{2, 20, false});
  ConvolutionPlan plan{BoxSpec{2, 20, false}, suggest_padding(D, 8), ConvMethod::Spectral};
  DerivativeAudit audit = audit_derivative_bound(D, p, 8, plan);
  CHECK(audit.pass);
  CHECK(audit.max_constant > 0.0);

  LongRangeParams p2{2, 2.0, 2.0, KernelVariant::DirectPowerLaw};
  auto [D2, t2] = build_power_law_kernel(p2, BoxSpec{2, 8, false});
  ConvolutionPlan plan2{BoxSpec{2, 8, false}, 4, ConvMethod::Spectral};
  CHECK_THROWS_AS(audit_derivative_bound(D2, p2, 4, plan2), std::invalid_argument);
}
