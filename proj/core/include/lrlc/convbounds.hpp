#pragma once

#include <string>
#include <vector>

#include "lrlc/lattice.hpp"

namespace lrlc {

enum class ConvRegime { A1_gt_d, A1_eq_d_A2_eq_1, A1_eq_d_A2_ne_1, Interior, Boundary };

std::string regime_name(ConvRegime r);

// Exponents of the convolution bound on power functions with log corrections:
//   sum_y <x-y>_L^{-a1} (log<(x-y)/L>_1)^{-a2} <y>_L^{-b1} (log<y/L>_1)^{-b2}
struct ExponentTuple {
  double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
  int d = 1;
  double L = 1.0;

  void validate() const; // a1 >= b1 > 0, a1 + b1 >= d, a2 >= b2 when a1 = b1
};

// The five envelope cases; throws (with the failed hypothesis named) for
// tuples inside the basic hypotheses but outside every case.
ConvRegime classify_regime(const ExponentTuple& t);

// One factor of the summand at radius rho: <rho>_L^{-a}(log<rho/L>_1)^{-a2}.
double power_log_term(double rho, double L, double a, double a2);

// The case envelope at x (the full right-hand side except the constant).
double rhs_envelope(const ExponentTuple& t, double xnorm);

// Exact summation over the box sites inside the inscribed ball |y| <= M,
// plus the analytic integral-comparison tail over |y| > M (the ball split
// makes the lattice sum and the spherical tail tile space exactly). x on the
// first axis rides a (d-1)-dimensional shell-count reduction; other x fall
// back to the full lattice loop (small boxes only).
double brute_force_lhs(const ExponentTuple& t, std::span<const int> x, const BoxSpec& box,
                       bool include_tail = true);

struct ConvBoundRow {
  double xnorm = 0, lhs = 0, rhs = 0, ratio = 0;
};

struct ConvBoundReport {
  ConvRegime regime = ConvRegime::Interior;
  double empirical_C = 0.0;   // max over samples of LHS / envelope
  double trend_slope = 0.0;   // log-log slope of the ratio, outer half
  double empirical_C_2L = 0.0;
  double L_shift = 0.0;       // |C(2L)/C(L) - 1|
  bool pass = false;
  std::vector<ConvBoundRow> table;
};

// default samples: powers of sqrt(2) along the first axis from 4L to box/3
std::vector<Site> default_x_samples(const ExponentTuple& t, const BoxSpec& box);

ConvBoundReport verify_bound(const ExponentTuple& t, const std::vector<Site>& x_samples,
                             const BoxSpec& box);

} // namespace lrlc
