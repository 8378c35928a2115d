#include "lrlc/convolution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrlc/transform.hpp"

namespace lrlc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLeakReject = 0.01;
constexpr double kClampFloor = -1e-14;

// Predicted growth factor of v[n] across the upper half of the n-range,
// from a log-log regression there.
double upper_half_growth(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 4) return 0.0;
  const std::size_t lo = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t i = lo; i < n; ++i) {
    if (!(v[i] > 0.0)) continue;
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  if (cnt < 3) return 0.0;
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  const double x1 = std::log(static_cast<double>(n / 2 + 1));
  const double x2 = std::log(static_cast<double>(n));
  return std::exp(slope * (x2 - x1));
}

} // namespace

int suggest_padding(const LongRangeParams& params, int n_max, int M_report) {
  // per-component step deviation of the truncated kernel grows like
  // L sqrt(log(M/L)); pad to ~3.4 sigma of the n_max-step walk
  const double n = std::max(n_max, 2);
  int M_pad = std::max(M_report, 1);
  for (int it = 0; it < 4; ++it) {
    const double lnML = std::log(std::max(static_cast<double>(M_pad) / params.L, 1.5));
    const double sigma2 =
        params.L * params.L * (1.0 / (params.d + 2.0) + lnML) /
        (params.d * (1.0 / params.d + 0.5));
    M_pad = std::max(M_report, static_cast<int>(std::ceil(3.4 * std::sqrt(sigma2 * n))));
  }
  return M_pad - M_report;
}

int suggest_padding(const SymField& D, int n_max) {
  const double sigma = step_component_sigma(D);
  const double spread = 3.4 * sigma * std::sqrt(std::max(n_max, 2));
  return std::max(0, static_cast<int>(std::ceil(spread)) - D.box.M);
}

double step_component_sigma(const SymField& D) {
  double s = 0.0;
  for_each_octant(D.box, [&](std::size_t i, std::span<const int> x, double mult) {
    double r2 = 0.0;
    for (int c : x) r2 += static_cast<double>(c) * c;
    s += mult * r2 * D.values[i];
  });
  return std::sqrt(s / D.box.d);
}

int max_steps_within(const SymField& D, const ConvolutionPlan& plan) {
  const double sigma = step_component_sigma(D);
  if (!(sigma > 0.0)) return 1;
  const double cap = 0.9 * plan.padded().M / (2.9 * sigma);
  return std::max(1, static_cast<int>(cap * cap));
}

SpectralPower::SpectralPower(const SymField& D, const ConvolutionPlan& p) : plan(p) {
  if (D.box.d != p.box.d || D.box.M > p.box.M)
    throw std::invalid_argument("SpectralPower: kernel box must fit the reporting box");
  if (p.padding < 0) throw std::invalid_argument("SpectralPower: negative padding");
  const BoxSpec pad = p.padded();
  Dhat = SymField(pad);
  for_each_octant(D.box, [&](std::size_t i, std::span<const int> x, double) {
    Dhat.values[octant_index(pad, x)] = D.values[i];
  });
  sym_dft_forward(Dhat);
}

NStepResult SpectralPower::power(int n) const {
  if (n < 0) throw std::invalid_argument("n_step: n must be >= 0");
  const BoxSpec pad = plan.padded();
  NStepResult out;
  out.field = SymField(plan.box);

  if (n == 0) {
    out.field.values[0] = 1.0;
    out.mass = 1.0;
    return out;
  }

  SymField Pn(pad);
  for (std::size_t i = 0; i < Pn.values.size(); ++i)
    Pn.values[i] = std::pow(Dhat.values[i], n);
  sym_dft_inverse(Pn);

  // Outer-ring mass of the padded torus gauges wrap-around contamination:
  // circular convolution folds any spread beyond the pad back into the ring.
  const int ring = static_cast<int>(0.9 * pad.M);
  double ring_mass = 0.0;
  for_each_octant(pad, [&](std::size_t i, std::span<const int> x, double mult) {
    int mx = 0;
    for (int j = 0; j < pad.d; ++j) mx = std::max(mx, x[j]);
    if (mx > ring) ring_mass += mult * std::max(Pn.values[i], 0.0);
  });

  double inside = 0.0;
  double minv = 0.0;
  std::size_t clamped = 0;
  for_each_octant(plan.box, [&](std::size_t i, std::span<const int> x, double mult) {
    double v = Pn.values[octant_index(pad, x)];
    minv = std::min(minv, v);
    if (v < 0.0) {
      if (v < kClampFloor) ++clamped;
      v = 0.0;
    }
    out.field.values[i] = v;
    inside += mult * v;
  });
  out.mass = inside;
  out.leakage = std::max(0.0, 1.0 - inside);
  out.wrap_ring_mass = ring_mass;
  out.clamped = clamped;
  out.min_before_clamp = minv;
  if (n >= 2 && ring_mass > kLeakReject)
    throw std::invalid_argument("n_step: walk spread exceeds the padded window (leakage > 1%)");
  return out;
}

NStepResult n_step(const SymField& D, int n, const ConvolutionPlan& plan) {
  if (plan.method == ConvMethod::Spectral) return SpectralPower(D, plan).power(n);

  // Direct method: repeated linear convolution on the padded full box.
  if (n < 0) throw std::invalid_argument("n_step: n must be >= 0");
  const BoxSpec pad = plan.padded();
  if (pad.volume() > 200'000)
    throw std::invalid_argument("n_step(Direct): box too large for the direct method");
  LatticeField Df(pad);
  LatticeField full = D.to_full();
  std::vector<int> c(D.box.d);
  for (std::size_t i = 0; i < full.values.size(); ++i) {
    site_coords(D.box, i, c);
    Df.values[site_index(pad, c)] = full.values[i];
  }
  LatticeField acc(pad);
  std::vector<int> o(pad.d, 0);
  acc.at(o) = 1.0;
  for (int s = 0; s < n; ++s) acc = direct_convolve_linear(acc, Df);

  NStepResult out;
  out.field = SymField(plan.box);
  double inside = 0.0;
  for_each_octant(plan.box, [&](std::size_t i, std::span<const int> x, double mult) {
    const double v = acc.values[site_index(pad, x)];
    out.field.values[i] = v;
    inside += mult * v;
  });
  out.mass = inside;
  out.leakage = std::max(0.0, 1.0 - inside);
  // linear convolution drops mass beyond the pad outright
  out.wrap_ring_mass = std::max(0.0, 1.0 - acc.sum());
  if (n >= 2 && out.wrap_ring_mass > kLeakReject)
    throw std::invalid_argument("n_step: walk spread exceeds the padded window (leakage > 1%)");
  return out;
}

DnAudit audit_assumption_Dn(const SymField& D, const LongRangeParams& params, int n_max,
                            const ConvolutionPlan& plan) {
  if (n_max < 2) throw std::invalid_argument("audit_assumption_Dn: n_max must be >= 2");
  params.validate();
  const double a2 = params.alpha2();
  const double Ld = std::pow(params.L, params.d);
  const double La2 = std::pow(params.L, a2);
  const int edge = std::max(1, static_cast<int>(0.9 * plan.box.M));

  SpectralPower sp(D, plan);

  // envelope field <x>_L^{d+a2} / (L^{a2} corr), zeroed outside the interior
  SymField envf(plan.box);
  for_each_octant(plan.box, [&](std::size_t i, std::span<const int> x, double) {
    for (int j = 0; j < plan.box.d; ++j)
      if (x[j] > edge) return;
    const double rho = euclid_norm(x);
    const double corr = params.alpha == 2.0 ? log_reg_norm_rho(rho, params.L) : 1.0;
    envf.values[i] = std::pow(reg_norm_rho(rho, params.L), params.d + a2) / (La2 * corr);
  });

  DnAudit audit;
  for (int n = 1; n <= n_max; ++n) {
    NStepResult rn;
    try {
      rn = sp.power(n);
    } catch (const std::invalid_argument&) {
      audit.fail_reason = "leakage gate reached before n_max";
      break;
    }
    const double supn = rn.field.max_value();
    const double sup_env = params.alpha == 2.0
                               ? std::pow(n * std::log(kPi * n / 2.0), 0.5 * params.d)
                               : std::pow(static_cast<double>(n), params.d / a2);
    audit.sup_constant.push_back(supn * Ld * sup_env);

    double point = 0.0;
    for (std::size_t i = 0; i < envf.values.size(); ++i)
      point = std::max(point, rn.field.values[i] * envf.values[i]);
    audit.point_constant.push_back(point / n);
    audit.n_reached = n;
  }

  audit.sup_trend = upper_half_growth(audit.sup_constant);
  audit.point_trend = upper_half_growth(audit.point_constant);
  audit.pass = audit.n_reached == n_max && audit.sup_trend <= 1.10 && audit.point_trend <= 1.10;
  if (!audit.pass && audit.fail_reason.empty())
    audit.fail_reason = audit.n_reached != n_max ? "n_max not reached"
                                                 : "unbounded trend in the upper n-range";
  return audit;
}

double derivative_ratio(const SymField& Dn, int n, const LongRangeParams& params,
                        std::span<const int> x, std::span<const int> y) {
  const double xn = euclid_norm(x);
  const double yn = euclid_norm(y);
  if (yn > xn / 3.0 + 1e-12)
    throw std::invalid_argument("derivative_ratio: requires |y| <= |x|/3");
  const double a2 = params.alpha2();
  std::vector<int> xp(x.size()), xm(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    xp[j] = x[j] + y[j];
    xm[j] = x[j] - y[j];
  }
  const double diff = std::abs(
      Dn.at(x) - 0.5 * (Dn.at(std::span<const int>(xp)) + Dn.at(std::span<const int>(xm))));
  const double envx = std::pow(reg_norm_rho(xn, params.L), params.d + a2 + 2.0);
  const double envy = std::pow(reg_norm_rho(yn, params.L), 2.0);
  return diff * envx / (n * std::pow(params.L, a2) * envy);
}

DerivativeAudit audit_derivative_bound(const SymField& D, const LongRangeParams& params,
                                       int n_max, const ConvolutionPlan& plan) {
  params.validate();
  if (params.alpha == 2.0)
    throw std::invalid_argument("audit_derivative_bound: stated for alpha != 2 only");

  SpectralPower sp(D, plan);
  DerivativeAudit audit;
  const int d = plan.box.d;
  const int Mr = plan.box.M;

  // x along the first axis and the main diagonal, log-spaced; y mixes unit
  // offsets with a quarter-|x| axis offset.
  std::vector<std::vector<int>> xs;
  const double x_lo = std::max(3.0, 2.0 * params.L);
  const double x_hi = 0.7 * Mr;
  for (double r = x_lo; r <= x_hi; r *= std::numbers::sqrt2) {
    std::vector<int> ax(d, 0);
    ax[0] = static_cast<int>(std::lround(r));
    xs.push_back(ax);
    const int c = static_cast<int>(std::lround(r / std::sqrt(static_cast<double>(d))));
    if (c >= 1) xs.push_back(std::vector<int>(d, c));
  }

  for (int n = 1; n <= n_max; n = n < 4 ? n + 1 : n * 2) {
    NStepResult rn;
    try {
      rn = sp.power(n);
    } catch (const std::invalid_argument&) {
      audit.fail_reason = "leakage gate reached before n_max";
      break;
    }
    double worst = 0.0;
    for (const auto& x : xs) {
      const double xn = euclid_norm(x);
      std::vector<std::vector<int>> ys;
      std::vector<int> e1(d, 0);
      e1[0] = 1;
      ys.push_back(e1);
      std::vector<int> ed(d, 0);
      ed[d - 1] = 1;
      ys.push_back(ed);
      std::vector<int> yq(d, 0);
      yq[0] = std::max(1, static_cast<int>(xn / 4.0));
      ys.push_back(yq);
      for (const auto& y : ys) {
        if (euclid_norm(y) > xn / 3.0) continue;
        bool inside = true;
        for (int j = 0; j < d; ++j)
          if (std::abs(x[j]) + std::abs(y[j]) > Mr) inside = false;
        if (!inside) continue;
        worst = std::max(worst, derivative_ratio(rn.field, n, params, x, y));
      }
    }
    audit.per_n_max.push_back(worst);
    audit.n_samples.push_back(n);
  }

  for (double v : audit.per_n_max) audit.max_constant = std::max(audit.max_constant, v);
  audit.trend = upper_half_growth(audit.per_n_max);
  audit.pass = !audit.per_n_max.empty() && audit.fail_reason.empty() && audit.trend <= 1.15;
  if (!audit.pass && audit.fail_reason.empty()) audit.fail_reason = "unbounded trend in n";
  return audit;
}

} // namespace lrlc
