#pragma once

#include <vector>

#include "lrlc/spectral.hpp"

namespace lrlc {

enum class GreenMethod { FourierInversion, NeumannSeries, SplitSeries };

struct GreenSpec {
  double p = 1.0;
  GreenMethod method = GreenMethod::FourierInversion;
  LongRangeParams params;
  int split_terms = 64; // SplitSeries: Neumann part length

  void validate(const BoxSpec& box) const;
};

struct GreenResult {
  SymField S;
  int terms = 0;                 // Neumann/Split terms actually summed
  double truncation_error = 0.0; // geometric tail bound of the Neumann part
  SmallKFit smallk;              // p=1: the subtracted singular model
  double subtraction_cut = 0.0;  // p=1: k_c of the smooth cutoff
  bool low_resolution = false;   // p=1 fallback without subtraction
};

// Random-walk Green function on the box torus. At p = 1 the k = 0 zone is
// handled by subtracting a fitted radial model of 1/(1-Dhat) around k = 0 on
// the dual grid and adding back its exact infinite-lattice transform (a 1-d
// Bessel-kernel integral), which removes both the singular-cell error and the
// image aliasing of the bare dual sum.
GreenResult green_function(const SymField& D, const GreenSpec& spec);

// max_x |S - delta - p (D * S)|(x) / max(S) over the interior window
// (circular convolution; the primary correctness oracle for every method).
double resolvent_residual(const SymField& S, const SymField& D, double p,
                          double trusted_frac = 0.6);

// Eq-lambda-style diagnostic: sup over the trusted window, x != o, of
// S(x) / (<x>_L^{2-d} / log<x/L>_1).
double green_lambda(const SymField& S, const LongRangeParams& params,
                    double trusted_frac = 0.6);

struct GreenUpperBoundAudit {
  double max_ratio = 0.0;   // empirical constant of the bound
  double trend_slope = 0.0; // log-log slope of shell means, outer half
  int shells = 0;
  bool pass = false;
};

// (S_p(x) - delta) <x>_L^{d-a2} L^{a2} corr, corr = log<x/L>_1 at alpha=2.
GreenUpperBoundAudit audit_green_upper_bound(const SymField& S, const LongRangeParams& params,
                                             double trusted_frac = 0.6);

struct AsymptoticsRow {
  double xnorm = 0.0;
  int direction = 0; // 0 = axis, 1 = diagonal
  double S1 = 0.0;
  double ratio = 0.0;         // R(x) with the log correction (alpha = 2)
  double ratio_nolog = 0.0;   // control ratio without the log factor
  double window_mean = 0.0;   // running windowed mean of R up to this row
};

struct GreenAsymptoticsAudit {
  std::vector<AsymptoticsRow> rows;
  std::vector<double> window_means;        // R, in log-|x| windows
  std::vector<double> window_abs_dev;      // |R - 1| window means
  std::vector<double> window_means_nolog;  // control ratio windows
  double final_mean = 0.0;
  double anisotropy = 0.0;   // max axis/diagonal split at comparable |x|
  double abs_dev_decay = 0.0; // |R-1| last/first window ratio (report-only)
  bool monotone_trend = false;
  bool pass = false;
};

// Ratio table for S_1 against gamma/v asymptotics along axis and diagonal,
// |x| from 2L^2 to trusted_frac * M. tolerance applies to |final_mean - 1|.
GreenAsymptoticsAudit audit_green_asymptotics(const SymField& S1,
                                              const AsymptoticConstants& constants,
                                              const LongRangeParams& params,
                                              double tolerance = 0.2,
                                              double trusted_frac = 0.6);

} // namespace lrlc
