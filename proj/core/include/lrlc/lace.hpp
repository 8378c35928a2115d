#pragma once

#include "lrlc/green.hpp"

namespace lrlc {

enum class LaceModel { SAW, PercIsing };

// Pi extracted from a two-point function by Fourier division of
// G = Pi + Pi * pD * G, i.e. Pi-hat = Ghat / (1 + p Dhat Ghat).
struct LaceExtract {
  SymField Pi;
  SymField Pi_hat;
  double p = 0.0;
  double pi_hat0 = 0.0;
  double denom_margin = 0.0; // min of 1 + p Dhat Ghat on the dual grid
  double decay_slope = 0.0;  // log-log slope of |Pi(x)| over shells, report-only
};

LaceExtract extract_pi(const SymField& G, const SymField& D, double p);

// Rebuild G from an extract: Ghat = Pi-hat / (1 - p Dhat Pi-hat).
SymField reconstruct_G(const LaceExtract& ex, const SymField& D);

// Resummation of the small-pi coefficients into Pi:
//   SAW:      Pi = delta + sum_{n>=1} (-p D(o) delta + pi)^{*n}
//   PercIsing Pi = pi + sum_{n>=1} (-p D(o))^n pi^{*(n+1)}
// evaluated term by term with circular convolutions, truncated at 1-norm 1e-14.
SymField resum_pi_series(const SymField& pi_small, double D_at_o, double p, LaceModel model);

// Effective 1-step distribution script-D = (Pi * D) / Pi-hat(0).
struct EffectiveStep {
  SymField kernel;
  double fugacity_eff = 0.0; // p Pi-hat(0)
  double min_value = 0.0;
  double sum_defect = 0.0;
  bool positive = false; // min above -1e-12
  AssumptionAudit hatD_audit;
};

EffectiveStep effective_step(const SymField& Pi, const SymField& D, double p,
                             const LongRangeParams& params);

// G = Pi * S_q at q = p Pi-hat(0), checked against the input G, plus the two
// susceptibility routes (direct sum vs Pi-hat(0) / (1 - p Pi-hat(0))).
struct GreenIdentityReport {
  double q = 0.0;
  double max_rel_dev = 0.0;
  double chi_direct = 0.0;
  double chi_lace = 0.0;
  double chi_rel_dev = 0.0;
};

GreenIdentityReport verify_green_identity(const SymField& G, const LaceExtract& ex,
                                          const EffectiveStep& eff,
                                          const LongRangeParams& params);

// Bootstrap diagnostic g_p = p \/ sup_x G(x) / (lambda <x>_L^{2-d}/log<x/L>_1).
double lace_g_p(const SymField& G, double p, double lambda, const LongRangeParams& params,
                double trusted_frac = 0.6);

// Second-moment bound constant for |Pi-hat(0) - Pi-hat(k)| <= c |k|^2.
double pi_second_moment_bound(const SymField& Pi);

} // namespace lrlc
