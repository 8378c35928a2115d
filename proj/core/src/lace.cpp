#include "lrlc/lace.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrlc/transform.hpp"

namespace lrlc {

namespace {
constexpr double kPi = std::numbers::pi;

double l1_norm(const SymField& f) {
  double s = 0.0;
  for_each_octant(f.box, [&](std::size_t i, std::span<const int>, double mult) {
    s += mult * std::abs(f.values[i]);
  });
  return s;
}
} // namespace

LaceExtract extract_pi(const SymField& G, const SymField& D, double p) {
  if (!(G.box.d == D.box.d && G.box.M == D.box.M))
    throw std::invalid_argument("extract_pi: box mismatch");
  if (p < 0.0) throw std::invalid_argument("extract_pi: p must be >= 0");

  SymField Ghat = G, Dhat = D;
  sym_dft_forward(Ghat);
  sym_dft_forward(Dhat);

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Ghat.values.size(); ++i)
    margin = std::min(margin, std::abs(1.0 + p * Dhat.values[i] * Ghat.values[i]));
  LaceExtract ex;
  ex.p = p;
  ex.denom_margin = margin;
  if (margin < 1e-6)
    throw std::invalid_argument("extract_pi: near-critical denominator margin < 1e-6");

  ex.Pi_hat = SymField(G.box);
  for (std::size_t i = 0; i < Ghat.values.size(); ++i)
    ex.Pi_hat.values[i] =
        Ghat.values[i] / (1.0 + p * Dhat.values[i] * Ghat.values[i]);
  ex.pi_hat0 = ex.Pi_hat.values[0];
  ex.Pi = ex.Pi_hat;
  sym_dft_inverse(ex.Pi);

  // report-only spatial decay of |Pi| against log-spaced shells
  {
    const double lo = std::log(1.5), hi = std::log(std::max(2.0, 0.9 * G.box.M));
    const int nb = 10;
    std::vector<double> ssum(nb, 0.0), scnt(nb, 0.0);
    for_each_octant(G.box, [&](std::size_t i, std::span<const int> x, double mult) {
      if (i == 0) return;
      const double r = euclid_norm(x);
      if (r < std::exp(lo) || r > std::exp(hi)) return;
      const int b = std::min(nb - 1, static_cast<int>(nb * (std::log(r) - lo) / (hi - lo)));
      ssum[b] += mult * std::abs(ex.Pi.values[i]);
      scnt[b] += mult;
    });
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (int b = 0; b < nb; ++b) {
      if (scnt[b] == 0.0 || ssum[b] <= 0.0) continue;
      const double x = lo + (b + 0.5) * (hi - lo) / nb;
      const double y = std::log(ssum[b] / scnt[b]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      n += 1;
    }
    ex.decay_slope = n >= 3 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  }
  return ex;
}

SymField reconstruct_G(const LaceExtract& ex, const SymField& D) {
  SymField Dhat = D;
  sym_dft_forward(Dhat);
  SymField Ghat(D.box);
  for (std::size_t i = 0; i < Ghat.values.size(); ++i) {
    const double den = 1.0 - ex.p * Dhat.values[i] * ex.Pi_hat.values[i];
    Ghat.values[i] = ex.Pi_hat.values[i] / den;
  }
  sym_dft_inverse(Ghat);
  return Ghat;
}

SymField resum_pi_series(const SymField& pi_small, double D_at_o, double p, LaceModel model) {
  if (D_at_o < 0.0) throw std::invalid_argument("resum_pi_series: D(o) must be >= 0");
  const double pi_l1 = l1_norm(pi_small);
  const double pDo = p * D_at_o;
  if (model == LaceModel::SAW) {
    if (!(pDo + pi_l1 < 1.0))
      throw std::invalid_argument("resum_pi_series(SAW): requires p D(o) + ||pi||_1 < 1");
  } else {
    if (!(pDo * pi_l1 < 1.0))
      throw std::invalid_argument("resum_pi_series(PercIsing): requires p D(o) ||pi||_1 < 1");
  }

  const BoxSpec& box = pi_small.box;
  SymField Pi(box);
  if (model == LaceModel::SAW) {
    // base = -p D(o) delta + pi; Pi = delta + sum_n base^{*n}
    SymField base = pi_small;
    base.values[0] -= pDo;
    Pi.values[0] = 1.0;
    SymField term = base;
    for (int n = 1; n <= 10000; ++n) {
      for (std::size_t i = 0; i < Pi.values.size(); ++i) Pi.values[i] += term.values[i];
      if (l1_norm(term) < 1e-14) break;
      term = circ_convolve(term, base);
    }
  } else {
    // Pi = pi + sum_n (-p D(o))^n pi^{*(n+1)}
    Pi = pi_small;
    SymField pipow = pi_small;
    double coef = 1.0;
    for (int n = 1; n <= 10000; ++n) {
      pipow = circ_convolve(pipow, pi_small);
      coef *= -pDo;
      if (std::abs(coef) * l1_norm(pipow) < 1e-14 && n > 1) break;
      for (std::size_t i = 0; i < Pi.values.size(); ++i)
        Pi.values[i] += coef * pipow.values[i];
      if (coef == 0.0) break;
    }
  }
  return Pi;
}

EffectiveStep effective_step(const SymField& Pi, const SymField& D, double p,
                             const LongRangeParams& params) {
  if (!(Pi.box.d == D.box.d && Pi.box.M == D.box.M))
    throw std::invalid_argument("effective_step: box mismatch");
  SymField Pihat = Pi;
  sym_dft_forward(Pihat);
  const double pihat0 = Pihat.values[0];
  if (!(pihat0 > 0.0)) throw std::invalid_argument("effective_step: Pi-hat(0) must be > 0");

  SymField kernel = circ_convolve(Pi, D);
  for (double& v : kernel.values) v /= pihat0;

  EffectiveStep eff;
  eff.min_value = kernel.min_value();
  eff.sum_defect = std::abs(kernel.sum() - 1.0);
  eff.positive = eff.min_value >= -1e-12;
  eff.fugacity_eff = p * pihat0;
  eff.kernel = std::move(kernel);
  eff.hatD_audit = audit_assumption_hatD(eff.kernel, params);
  return eff;
}

GreenIdentityReport verify_green_identity(const SymField& G, const LaceExtract& ex,
                                          const EffectiveStep& eff,
                                          const LongRangeParams& params) {
  GreenIdentityReport rep;
  rep.q = eff.fugacity_eff;
  if (!(rep.q < 1.0))
    throw std::invalid_argument("verify_green_identity: requires p Pi-hat(0) < 1");

  GreenSpec spec{rep.q, GreenMethod::FourierInversion, params};
  GreenResult Sq = green_function(eff.kernel, spec);
  SymField recon = circ_convolve(ex.Pi, Sq.S);

  const int edge = static_cast<int>(0.6 * G.box.M);
  const double floor_ = 1e-14 * std::max(G.max_abs(), 1e-300);
  for_each_octant(G.box, [&](std::size_t i, std::span<const int> x, double) {
    for (int j = 0; j < G.box.d; ++j)
      if (x[j] > edge) return;
    const double dev = std::abs(recon.values[i] - G.values[i]) /
                       std::max(std::abs(G.values[i]), floor_);
    rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
  });

  rep.chi_direct = G.sum();
  rep.chi_lace = ex.pi_hat0 / (1.0 - ex.p * ex.pi_hat0);
  rep.chi_rel_dev = std::abs(rep.chi_direct / rep.chi_lace - 1.0);
  return rep;
}

double lace_g_p(const SymField& G, double p, double lambda, const LongRangeParams& params,
                double trusted_frac) {
  const int edge = std::max(1, static_cast<int>(trusted_frac * G.box.M));
  double sup = 0.0;
  for_each_octant(G.box, [&](std::size_t i, std::span<const int> x, double) {
    if (i == 0) return;
    for (int j = 0; j < G.box.d; ++j)
      if (x[j] > edge) return;
    const double rho = euclid_norm(x);
    const double env = lambda * std::pow(reg_norm_rho(rho, params.L), 2.0 - params.d) /
                       log_reg_norm_rho(rho, params.L);
    sup = std::max(sup, G.values[i] / env);
  });
  return std::max(p, sup);
}

double pi_second_moment_bound(const SymField& Pi) {
  double c = 0.0;
  for_each_octant(Pi.box, [&](std::size_t i, std::span<const int> x, double mult) {
    double r2 = 0.0;
    for (int v : x) r2 += static_cast<double>(v) * v;
    c += mult * r2 * std::abs(Pi.values[i]);
  });
  return 0.5 * c;
}

} // namespace lrlc
