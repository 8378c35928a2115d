#pragma once

#include <optional>

#include "lrlc/kernels.hpp"
#include "lrlc/transform.hpp"

namespace lrlc {

// Public transform of an arbitrary box field (e^{+ik.x} convention).
// Imaginary parts below 1e-12 of the field's 1-norm are zeroed.
SpectralField fourier_transform(const LatticeField& f);
LatticeField inverse_fourier_transform(const SpectralField& fh);

// gamma_alpha = Gamma((d - a2)/2) / (2^a2 pi^{d/2} Gamma(a2/2)), a2 = alpha /\ 2.
// Requires d > alpha /\ 2.
double compute_gamma(int d, double alpha);

// Radial least-squares model of 1 - Dhat(k) on the smallest dual shells.
//   log form  (alpha = 2):  m(r) = r^2 (v lnL(r) + c0) [+ r^4 (c2 lnL(r) + c3)]
//   pure form (alpha != 2): m(r) = r^a (v + c0 r^2)
// with lnL(r) = log(pi / (2 L r)). The quartic terms soak up curvature so the
// model tracks 1 - Dhat through the whole fit window; the Green-function
// inversion at p = 1 subtracts exactly this model around k = 0.
struct SmallKFit {
  int d = 0;
  double L = 1.0;
  double a = 2.0; // alpha /\ 2 exponent of the leading power
  bool log_form = false;
  bool quartic = false;
  double v = 0.0, c0 = 0.0, c2 = 0.0, c3 = 0.0;
  double r_lo = 0.0, r_hi = 0.0; // fit window in |k|
  double max_rel_residual = 1.0; // of the model over the window
  bool usable = false;

  double eval(double r) const; // model value of 1 - Dhat at |k| = r
  double positive_up_to() const; // largest r in (0, r_hi] with m > 0 on (0, r]
};

SmallKFit fit_small_k(const SymField& Dhat, const LongRangeParams& params, bool quartic);

// v_alpha estimate per the limit definition, with fit diagnostics.
struct AsymptoticConstants {
  double gamma_alpha = 0.0;
  double v_alpha = 0.0;
  double c0 = 0.0;           // alpha=2: the fitted O(1) companion of the log
  double fit_window_lo = 0.0;
  double fit_window_hi = 0.0;
  double fit_residual = 1.0; // max relative deviation over the window
  double correction_exponent = 0.0; // alpha != 2: empirical epsilon, report-only
  bool pass = false;         // residual < 5%
};

AsymptoticConstants estimate_v(const SymField& D, const LongRangeParams& params);

// Empirical certificate for the step-distribution transform bounds.
struct AssumptionAudit {
  double delta_hat = 0.0;          // min over |k| > 1/L of 1 - Dhat
  double max_one_minus_dhat = 0.0; // must stay below 2 - delta_hat
  double small_k_ratio_min = 0.0;  // (1-Dhat) / ((L|k|)^a corr) over 0 < |k| <= 1/L
  double small_k_ratio_max = 0.0;
  int small_k_points = 0;
  double asy_v = 0.0, asy_c0 = 0.0, asy_residual = 1.0; // alpha=2 form fit
  bool pass = false;
  std::string fail_reason;
};

AssumptionAudit audit_assumption_hatD(const SymField& D, const LongRangeParams& params);

// Dual-grid quadrature of Dhat^2 / (1 - Dhat)^m with the k = 0 cell replaced
// by the small-k model integral. m in {2, 3}; throws if 1 - Dhat <= 0 off 0.
double compute_delta_m(const SymField& D, int m, const LongRangeParams& params);

} // namespace lrlc
