#pragma once

#include <cstdint>
#include <utility>

#include "lrlc/field.hpp"

namespace lrlc {

enum class KernelVariant { DirectPowerLaw, CompoundZeta };

// Parameters of a long-range 1-step distribution with tail ~ |x|^{-d-alpha}.
// The CompoundZeta variant mixes t-fold convolutions of the discretized
// uniform profile h(x) = 2^{-d} 1{||x||_inf <= 1} with zeta weights
// T_alpha(t) = t^{-1-alpha/2} / zeta(1+alpha/2).
struct LongRangeParams {
  int d = 1;
  double alpha = 2.0; // decay exponent, > 0
  double L = 1.0;     // spread-out parameter, >= 1
  KernelVariant variant = KernelVariant::DirectPowerLaw;
  std::uint64_t t_max = 0; // CompoundZeta t-sum cutoff; 0 = default policy

  void validate() const;
  double alpha2() const; // alpha /\ 2
  std::uint64_t effective_t_max(const BoxSpec& box) const;
  std::string cache_tag() const;
};

// Bookkeeping for the finite-box surrogate of an infinite-lattice kernel.
struct TailReport {
  double truncated_mass = 0.0;        // mass of the exact kernel lost to the box
  double renormalization_factor = 1.0; // 1 / (1 - truncated_mass)
  double zeta_tail = 0.0;             // CompoundZeta: sum_{t > t_max} T_alpha(t)
  double zeta_tail_bound = 0.0;       // documented (2/alpha) t_max^{-alpha/2} bound
  double fold_in_bias = 0.0;          // CompoundZeta: pad-ring image estimate at the box edge
  int build_pad_M = 0;                // CompoundZeta: half-width of the build grid
  bool low_resolution = false;        // L < 3: discretized profile is coarse
};

// D(x) proportional to <x>_L^{-d-alpha} off the origin, D(o) = 0, normalized
// to sum 1 over the box. Throws when the box is degenerate or the analytic
// tail estimate exceeds 1/2.
std::pair<SymField, TailReport> build_power_law_kernel(const LongRangeParams& params,
                                                       const BoxSpec& box);

// D = sum_{t<=t_max} U_L^{*t} T_alpha(t) realized through spectral powers of
// U_L-hat on a padded grid, restricted to the box and renormalized.
std::pair<SymField, TailReport> build_compound_zeta_kernel(const LongRangeParams& params,
                                                           const BoxSpec& box);

std::pair<SymField, TailReport> build_kernel(const LongRangeParams& params,
                                             const BoxSpec& box);

// Exact transform of the discretized profile step U_L at momentum k.
double profile_step_hat(const LongRangeParams& params, std::span<const double> k);

// Exact infinite-lattice transform of the CompoundZeta kernel at momentum k:
// polylog(1+alpha/2, U_hat) / zeta(1+alpha/2), truncated at t_max.
double compound_zeta_hat(const LongRangeParams& params, std::span<const double> k,
                         std::uint64_t t_max);

struct KernelAuditReport {
  double max_negativity = 0.0;
  double symmetry_defect = 0.0;
  double normalization_defect = 0.0;
  bool structurally_symmetric = false; // octant storage cannot break symmetry
};

KernelAuditReport kernel_audit(const SymField& D);
KernelAuditReport kernel_audit(const LatticeField& D);

// Range of D(x) / (L^{-d} <x/L>_1^{-d-alpha}) over box sites x != o; the
// two-sided comparability constant of the step-distribution condition.
std::pair<double, double> kernel_ratio_range(const SymField& D, const LongRangeParams& params);

} // namespace lrlc
