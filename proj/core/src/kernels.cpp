#include "lrlc/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lrlc/numerics.hpp"
#include "lrlc/transform.hpp"

namespace lrlc {

namespace {

constexpr double kPi = std::numbers::pi;

// Memory cap for the padded CompoundZeta build grid (one octant array).
constexpr std::size_t kPadBudgetBytes = std::size_t{1600} * 1024 * 1024;

double dirichlet(int W, double k) {
  // sum_{x=-W..W} cos(k x)
  if (std::abs(std::sin(0.5 * k)) < 1e-14) return 2.0 * W + 1.0;
  return std::sin((W + 0.5) * k) / std::sin(0.5 * k);
}

} // namespace

void LongRangeParams::validate() const {
  if (d < 1) throw std::invalid_argument("LongRangeParams: d must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("LongRangeParams: alpha must be > 0");
  if (!(L >= 1.0)) throw std::invalid_argument("LongRangeParams: L must be >= 1");
}

double LongRangeParams::alpha2() const { return std::min(alpha, 2.0); }

std::uint64_t LongRangeParams::effective_t_max(const BoxSpec& box) const {
  if (t_max > 0) return t_max;
  const double side = 2.0 * box.M + 1.0;
  const double def = 10.0 * L * L * side * side;
  return static_cast<std::uint64_t>(std::min(def, 1e6));
}

std::string LongRangeParams::cache_tag() const {
  std::ostringstream os;
  os << "d=" << d << ";alpha=" << format_double(alpha) << ";L=" << format_double(L)
     << ";variant=" << (variant == KernelVariant::DirectPowerLaw ? "power" : "zeta")
     << ";t_max=" << t_max;
  return os.str();
}

std::pair<SymField, TailReport> build_power_law_kernel(const LongRangeParams& params,
                                                       const BoxSpec& box) {
  params.validate();
  if (params.variant != KernelVariant::DirectPowerLaw)
    throw std::invalid_argument("build_power_law_kernel: wrong variant");
  if (box.d != params.d) throw std::invalid_argument("build_power_law_kernel: dimension mismatch");

  const double expo = params.d + params.alpha;
  // radial values depend on |x|^2 only; one pow per distinct square radius
  std::vector<double> lut(static_cast<std::size_t>(box.d) * box.M * box.M + 1, -1.0);
  SymField D(box);
  double norm = 0.0;
  for_each_octant(box, [&](std::size_t i, std::span<const int> x, double mult) {
    if (i == 0) return; // D(o) = 0
    std::size_t r2 = 0;
    for (int c : x) r2 += static_cast<std::size_t>(c) * c;
    double v = lut[r2];
    if (v < 0.0)
      v = lut[r2] = std::pow(reg_norm_rho(std::sqrt(static_cast<double>(r2)), params.L), -expo);
    D.values[i] = v;
    norm += mult * v;
  });
  if (norm <= 0.0)
    throw std::invalid_argument("build_power_law_kernel: degenerate box (M = 0)");

  // Integral-comparison tail over |x| > M of ((pi/2)|x|)^{-d-alpha}.
  TailReport tail;
  if (box.M >= 1) {
    const double tail_unnorm = sphere_area(params.d) * std::pow(kPi / 2.0, -expo) *
                               std::pow(static_cast<double>(box.M), -params.alpha) / params.alpha;
    tail.truncated_mass = tail_unnorm / (norm + tail_unnorm);
  }
  tail.renormalization_factor = 1.0 / (1.0 - tail.truncated_mass);
  tail.low_resolution = params.L < 3.0;
  if (tail.truncated_mass >= 0.5)
    throw std::invalid_argument("build_power_law_kernel: box too small, truncated mass >= 1/2");

  for (double& v : D.values) v /= norm;
  return {std::move(D), tail};
}

double profile_step_hat(const LongRangeParams& params, std::span<const double> k) {
  const int W = static_cast<int>(std::floor(params.L));
  const double count = std::pow(2.0 * W + 1.0, params.d) - 1.0;
  if (count <= 0.0)
    throw std::invalid_argument("compound zeta: discretized profile has no mass off the origin");
  double prod = 1.0;
  for (double kj : k) prod *= dirichlet(W, kj);
  return (prod - 1.0) / count;
}

double compound_zeta_hat(const LongRangeParams& params, std::span<const double> k,
                         std::uint64_t t_max) {
  const double s = 1.0 + 0.5 * params.alpha;
  const double u = std::clamp(profile_step_hat(params, k), -1.0, 1.0);
  return polylog_partial(s, u, t_max) / std::riemann_zeta(s);
}

std::pair<SymField, TailReport> build_compound_zeta_kernel(const LongRangeParams& params,
                                                           const BoxSpec& box) {
  params.validate();
  if (params.variant != KernelVariant::CompoundZeta)
    throw std::invalid_argument("build_compound_zeta_kernel: wrong variant");
  if (box.d != params.d) throw std::invalid_argument("build_compound_zeta_kernel: dim mismatch");
  const std::uint64_t T = params.effective_t_max(box);
  if (T < 1) throw std::invalid_argument("build_compound_zeta_kernel: t_max must be >= 1");

  // Widest padded build grid that fits the memory budget. The pad ring
  // absorbs wrap-around images of the spread-out t-steps; what remains
  // inside the box is recorded as fold_in_bias.
  int padM = box.M;
  for (double f : {1.5, 1.375, 1.25, 1.125, 1.0}) {
    const int cand = static_cast<int>(std::ceil(f * box.M));
    BoxSpec pb{box.d, cand, true};
    std::size_t bytes;
    try {
      bytes = pb.octant_volume() * sizeof(double);
    } catch (const std::overflow_error&) {
      continue;
    }
    if (bytes <= kPadBudgetBytes) {
      padM = cand;
      break;
    }
  }
  const BoxSpec pad{box.d, padM, true};
  const int Npad = pad.side();

  const double s = 1.0 + 0.5 * params.alpha;
  const double zeta_s = std::riemann_zeta(s);

  SymField Dhat(pad);
  std::vector<double> kvec(params.d);
  for_each_octant(pad, [&](std::size_t i, std::span<const int> n, double) {
    for (int j = 0; j < params.d; ++j) kvec[j] = 2.0 * kPi * n[j] / Npad;
    const double u = std::clamp(profile_step_hat(params, kvec), -1.0, 1.0);
    Dhat.values[i] = polylog_partial(s, u, T) / zeta_s;
  });
  sym_dft_inverse(Dhat); // now the periodized truncated kernel on the pad grid

  SymField D(box);
  double box_mass = 0.0;
  for_each_octant(box, [&](std::size_t i, std::span<const int> x, double mult) {
    const double v = std::max(Dhat.values[octant_index(pad, x)], 0.0);
    D.values[i] = v;
    box_mass += mult * v;
  });

  TailReport tail;
  tail.zeta_tail = std::max(0.0, 1.0 - polylog_partial(s, 1.0, T) / zeta_s);
  tail.zeta_tail_bound =
      (2.0 / params.alpha) * std::pow(static_cast<double>(T), -0.5 * params.alpha);
  tail.truncated_mass = std::max(0.0, 1.0 - box_mass);
  tail.renormalization_factor = 1.0 / (1.0 - tail.truncated_mass);
  tail.build_pad_M = padM;
  tail.low_resolution = params.L < 3.0;
  if (box.M >= 1) {
    const double img = Npad - box.M; // nearest wrap-around image distance
    tail.fold_in_bias = std::pow(img / static_cast<double>(box.M), -(params.d + params.alpha));
  }

  for (double& v : D.values) v /= box_mass;
  return {std::move(D), tail};
}

std::pair<SymField, TailReport> build_kernel(const LongRangeParams& params, const BoxSpec& box) {
  if (params.variant == KernelVariant::DirectPowerLaw)
    return build_power_law_kernel(params, box);
  return build_compound_zeta_kernel(params, box);
}

KernelAuditReport kernel_audit(const SymField& D) {
  KernelAuditReport rep;
  rep.structurally_symmetric = true;
  rep.max_negativity = std::max(0.0, -D.min_value());
  rep.normalization_defect = std::abs(D.sum() - 1.0);
  return rep;
}

KernelAuditReport kernel_audit(const LatticeField& D) {
  KernelAuditReport rep;
  double mn = 0.0;
  for (double v : D.values) mn = std::min(mn, v);
  rep.max_negativity = -mn;
  rep.normalization_defect = std::abs(D.sum() - 1.0);
  const std::size_t V = D.box.volume();
  std::vector<int> c(D.box.d), m(D.box.d);
  double sym = 0.0;
  for (std::size_t i = 0; i < V; ++i) {
    site_coords(D.box, i, c);
    for (int j = 0; j < D.box.d; ++j) m[j] = -c[j];
    sym = std::max(sym, std::abs(D.values[i] - D.values[site_index(D.box, m)]));
  }
  rep.symmetry_defect = sym;
  return rep;
}

std::pair<double, double> kernel_ratio_range(const SymField& D, const LongRangeParams& params) {
  const double expo = params.d + params.alpha;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for_each_octant(D.box, [&](std::size_t i, std::span<const int> x, double) {
    if (i == 0) return;
    const double rho = euclid_norm(x) / params.L;
    const double envelope =
        std::pow(params.L, -params.d) * std::pow(reg_norm_rho(rho, 1.0), -expo);
    const double r = D.values[i] / envelope;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  });
  return {lo, hi};
}

} // namespace lrlc
