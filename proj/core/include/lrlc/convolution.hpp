#pragma once

#include <vector>

#include "lrlc/kernels.hpp"

namespace lrlc {

enum class ConvMethod { Spectral, Direct };

// Reporting box plus a zero-pad margin wide enough that circular convolution
// on the padded torus equals linear convolution inside the reporting window.
struct ConvolutionPlan {
  BoxSpec box;      // reporting window
  int padding = 0;  // margin in sites; padded half-width is box.M + padding
  ConvMethod method = ConvMethod::Spectral;

  BoxSpec padded() const { return BoxSpec{box.d, box.M + padding, true}; }
};

// Pad margin so an n_max-step walk stays ~3 sigma inside the padded torus;
// the kernel-measured overload uses the actual step deviation.
int suggest_padding(const LongRangeParams& params, int n_max, int M_report);
int suggest_padding(const SymField& D, int n_max);

// Per-component standard deviation of one step of D.
double step_component_sigma(const SymField& D);

// Largest n whose walk stays inside the padded window at the 1% leakage gate.
int max_steps_within(const SymField& D, const ConvolutionPlan& plan);

struct NStepResult {
  SymField field;        // D^{*n} restricted to the reporting box
  double leakage = 0.0;  // probability mass outside the reporting box
  double mass = 0.0;     // mass retained inside the box
  double wrap_ring_mass = 0.0;  // mass in the outer 10% of the padded torus
  std::size_t clamped = 0;      // entries clamped from tiny spectral negatives
  double min_before_clamp = 0.0;
};

// D-hat on the padded grid held once; n-step fields on demand.
struct SpectralPower {
  ConvolutionPlan plan;
  SymField Dhat; // on plan.padded()

  SpectralPower(const SymField& D, const ConvolutionPlan& plan);
  NStepResult power(int n) const; // rejects when leakage exceeds 1%
};

NStepResult n_step(const SymField& D, int n, const ConvolutionPlan& plan);

// Empirical constants of the n-step sup and pointwise bounds, n = 1..n_max.
struct DnAudit {
  std::vector<double> sup_constant;   // ||D^{*n}||_inf L^d (n log(pi n/2))^{d/2} or n^{d/a2}
  std::vector<double> point_constant; // sup_x D^{*n}(x) <x>_L^{d+a2} / (n L^{a2} corr)
  double sup_trend = 0.0;             // predicted upper-half growth ratios
  double point_trend = 0.0;
  int n_reached = 0;
  bool pass = false;
  std::string fail_reason;
};

DnAudit audit_assumption_Dn(const SymField& D, const LongRangeParams& params, int n_max,
                            const ConvolutionPlan& plan);

// |D^{*n}(x) - (D^{*n}(x+y) + D^{*n}(x-y))/2| <x>_L^{d+a2+2} / (n L^{a2} <y>_L^2)
// over sampled (n, x, y) with |y| <= |x|/3. alpha != 2 only.
struct DerivativeAudit {
  double max_constant = 0.0;
  std::vector<double> per_n_max; // indexed by the sampled n list
  std::vector<int> n_samples;
  double trend = 0.0;
  bool pass = false;
  std::string fail_reason;
};

DerivativeAudit audit_derivative_bound(const SymField& D, const LongRangeParams& params,
                                       int n_max, const ConvolutionPlan& plan);

// Single symmetric-difference ratio; rejects pairs with |y| > |x|/3.
double derivative_ratio(const SymField& Dn, int n, const LongRangeParams& params,
                        std::span<const int> x, std::span<const int> y);

} // namespace lrlc
