#include "lrlc/green.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "lrlc/numerics.hpp"
#include "lrlc/transform.hpp"

namespace lrlc {

namespace {

constexpr double kPi = std::numbers::pi;

double smoothstep_down(double r, double r1, double r2) {
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  const double s = (r - r1) / (r2 - r1);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

// Radial profile of the subtracted model's infinite-lattice transform:
//   T_A(rho) = S_{d-1}/(2pi)^d  Int_0^{kc} g(r) w(r)/m(r) r^{d-1} Phi_d(r rho) dr
// by panel Gauss-Legendre with panels capped at the Bessel oscillation scale.
class RadialTransform {
 public:
  RadialTransform(const SmallKFit& fit, double k1, double kc, int d,
                  std::function<double(double)> extra)
      : fit_(fit), k1_(k1), kc_(kc), d_(d), extra_(std::move(extra)) {}

  double operator()(double rho) const {
    const double prefac = sphere_area(d_) / std::pow(2.0 * kPi, d_);
    double total = 0.0;
    double a = 0.0;
    const double first = kc_ / 256.0;
    while (a < kc_) {
      double width = a == 0.0 ? first : a;
      if (rho > 0.0) width = std::min(width, kPi / (2.0 * rho));
      const double b = std::min(a + width, kc_);
      total += gauss16(a, b, rho);
      a = b;
    }
    return prefac * total;
  }

 private:
  double integrand(double r, double rho) const {
    if (r <= 0.0) return 0.0;
    const double m = fit_.eval(r);
    if (!(m > 0.0)) return 0.0;
    const double w = smoothstep_down(r, k1_, kc_);
    if (w == 0.0) return 0.0;
    return extra_(r) * w / m * std::pow(r, d_ - 1) * angular_kernel(d_, r * rho);
  }

  double gauss16(double a, double b, double rho) const {
    static const double xs[8] = {0.0950125098376374, 0.2816035507792589,
                                 0.4580167776572274, 0.6178762444026438,
                                 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double ws[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i)
      s += ws[i] * (integrand(c - h * xs[i], rho) + integrand(c + h * xs[i], rho));
    return s * h;
  }

  const SmallKFit& fit_;
  double k1_, kc_;
  int d_;
  std::function<double(double)> extra_;
};

// Uniform-grid table of T_A with Catmull-Rom interpolation.
struct RadialTable {
  double step = 0.25;
  std::vector<double> vals;

  double operator()(double rho) const {
    const double t = rho / step;
    long i = static_cast<long>(t);
    if (i + 2 >= static_cast<long>(vals.size())) return vals.back();
    const double f = t - i;
    const double p0 = vals[std::max<long>(i - 1, 0)];
    const double p1 = vals[i], p2 = vals[i + 1], p3 = vals[i + 2];
    return p1 + 0.5 * f * (p2 - p0 + f * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                          f * (3 * (p1 - p2) + p3 - p0)));
  }
};

RadialTable tabulate_radial(const RadialTransform& tr, double rho_max) {
  RadialTable tab;
  const std::size_t n = static_cast<std::size_t>(rho_max / tab.step) + 4;
  tab.vals.resize(n);
  for (std::size_t i = 0; i < n; ++i) tab.vals[i] = tr(i * tab.step);
  return tab;
}

// log-log slope over the outer half of (radius, value) shell tables.
double shell_trend(const std::vector<double>& radius, const std::vector<double>& value) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t i = radius.size() / 2; i < radius.size(); ++i) {
    if (!(value[i] > 0.0)) continue;
    const double x = std::log(radius[i]), y = std::log(value[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  if (n < 3) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

void GreenSpec::validate(const BoxSpec& box) const {
  params.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("GreenSpec: p must be in [0,1]");
  if (p == 1.0 && !(box.d > params.alpha2()))
    throw std::invalid_argument("GreenSpec: p = 1 requires d > alpha /\\ 2");
  if (p == 1.0 && method == GreenMethod::NeumannSeries)
    throw std::invalid_argument("GreenSpec: NeumannSeries requires p < 1");
}

GreenResult green_function(const SymField& D, const GreenSpec& spec) {
  spec.validate(D.box);
  const BoxSpec& box = D.box;
  GreenResult out;

  if (spec.p == 0.0) {
    out.S = SymField(box);
    out.S.values[0] = 1.0;
    return out;
  }

  if (spec.method == GreenMethod::NeumannSeries) {
    // S = sum p^n D^{*n}, truncated on the geometric sup-norm certificate
    SymField Dhat = D;
    sym_dft_forward(Dhat);
    SymField acc(box);
    acc.values[0] = 1.0; // n = 0 term
    SymField Anhat(box);
    for (std::size_t i = 0; i < Anhat.values.size(); ++i) Anhat.values[i] = 1.0;
    const double supD = D.max_value();
    double pn = 1.0;
    int n = 0;
    while (true) {
      ++n;
      pn *= spec.p;
      for (std::size_t i = 0; i < Anhat.values.size(); ++i) Anhat.values[i] *= Dhat.values[i];
      SymField term = Anhat;
      sym_dft_inverse(term);
      for (std::size_t i = 0; i < acc.values.size(); ++i)
        acc.values[i] += pn * term.values[i];
      const double tail = pn * spec.p * supD / (1.0 - spec.p);
      if (tail < 1e-14 || n > 100000) {
        out.truncation_error = tail;
        break;
      }
    }
    out.terms = n;
    out.S = std::move(acc);
    return out;
  }

  // Fourier inversion (and the split-series variant at p = 1).
  SymField work = D;
  sym_dft_forward(work); // Dhat

  if (spec.p < 1.0) {
    double minden = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < work.values.size(); ++i)
      minden = std::min(minden, 1.0 - spec.p * work.values[i]);
    if (!(minden > 0.0))
      throw std::invalid_argument("green_function: 1 - p Dhat <= 0 off k = 0");
    for (double& v : work.values) v = 1.0 / (1.0 - spec.p * v);
    sym_dft_inverse(work);
    out.S = std::move(work);
    return out;
  }

  // p = 1: zero mode removed; singular model subtracted and restored.
  double min_z = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < work.values.size(); ++i)
    min_z = std::min(min_z, 1.0 - work.values[i]);
  if (!(min_z > 0.0))
    throw std::invalid_argument("green_function: 1 - Dhat <= 0 off k = 0");

  SmallKFit fit = fit_small_k(work, spec.params, /*quartic=*/true);
  const int N = box.side();
  const int n0 = spec.method == GreenMethod::SplitSeries ? spec.split_terms : 0;

  if (!fit.usable) {
    // coarse fallback: bare dual sum with the zero mode dropped
    out.low_resolution = true;
    work.values[0] = 0.0;
    for (std::size_t i = 1; i < work.values.size(); ++i)
      work.values[i] = 1.0 / (1.0 - work.values[i]);
    sym_dft_inverse(work);
    out.S = std::move(work);
    return out;
  }

  const double kc = 0.95 * std::min(fit.positive_up_to(), fit.r_hi);
  const double k1 = 0.5 * kc;
  out.smallk = fit;
  out.subtraction_cut = kc;

  // data side: R(k) = Dhat^{n0}/(1-Dhat) - w(|k|) g(|k|)/m(|k|);  R(0) = 0
  {
    SymField& R = work;
    std::vector<int> nc(box.d);
    for (std::size_t i = 1; i < R.values.size(); ++i) {
      octant_coords(box, i, nc);
      double k2 = 0.0;
      for (int j = 0; j < box.d; ++j) {
        const double kj = 2.0 * kPi * nc[j] / N;
        k2 += kj * kj;
      }
      const double r = std::sqrt(k2);
      const double dh = R.values[i];
      double val = (n0 > 0 ? std::pow(dh, n0) : 1.0) / (1.0 - dh);
      const double w = smoothstep_down(r, k1, kc);
      if (w > 0.0) {
        const double m = fit.eval(r);
        if (m > 0.0) {
          const double g = n0 > 0 ? std::exp(-n0 * m) : 1.0;
          val -= w * g / m;
        }
      }
      R.values[i] = val;
    }
    R.values[0] = 0.0;
    sym_dft_inverse(R);
  }

  // model side: exact infinite-lattice transform of the subtracted part
  RadialTransform tr(fit, k1, kc, box.d, [n0, &fit](double r) {
    return n0 > 0 ? std::exp(-n0 * fit.eval(r)) : 1.0;
  });
  const double rho_max = std::sqrt(static_cast<double>(box.d)) * (box.M + 2);
  RadialTable tab = tabulate_radial(tr, rho_max);

  for_each_octant(box, [&](std::size_t i, std::span<const int> x, double) {
    work.values[i] += tab(euclid_norm(x));
  });

  if (n0 > 0) {
    // add back the exact circular Neumann head sum_{n<n0} D^{*n}
    SymField Dhat2 = D;
    sym_dft_forward(Dhat2);
    SymField head(box);
    for (std::size_t i = 0; i < head.values.size(); ++i) {
      const double dh = Dhat2.values[i];
      head.values[i] = std::abs(1.0 - dh) < 1e-15
                           ? static_cast<double>(n0)
                           : (1.0 - std::pow(dh, n0)) / (1.0 - dh);
    }
    sym_dft_inverse(head);
    // its zero mode belongs to the removed k = 0 line: subtract the mean
    const double mean = static_cast<double>(n0) / static_cast<double>(box.volume());
    for (std::size_t i = 0; i < head.values.size(); ++i)
      work.values[i] += head.values[i] - mean;
    out.terms = n0;
  }

  out.S = std::move(work);
  return out;
}

double resolvent_residual(const SymField& S, const SymField& D, double p,
                          double trusted_frac) {
  if (!(S.box == D.box)) throw std::invalid_argument("resolvent_residual: box mismatch");
  SymField conv = circ_convolve(D, S);
  const int edge = static_cast<int>(trusted_frac * S.box.M);
  double worst = 0.0;
  const double scale = S.max_abs();
  for_each_octant(S.box, [&](std::size_t i, std::span<const int> x, double) {
    for (int j = 0; j < S.box.d; ++j)
      if (x[j] > edge) return;
    const double delta = i == 0 ? 1.0 : 0.0;
    const double resid = std::abs(S.values[i] - delta - p * conv.values[i]);
    worst = std::max(worst, resid);
  });
  return worst / scale;
}

double green_lambda(const SymField& S, const LongRangeParams& params, double trusted_frac) {
  const int edge = std::max(1, static_cast<int>(trusted_frac * S.box.M));
  double sup = 0.0;
  for_each_octant(S.box, [&](std::size_t i, std::span<const int> x, double) {
    if (i == 0) return;
    for (int j = 0; j < S.box.d; ++j)
      if (x[j] > edge) return;
    const double rho = euclid_norm(x);
    const double env = std::pow(reg_norm_rho(rho, params.L), 2.0 - params.d) /
                       log_reg_norm_rho(rho, params.L);
    sup = std::max(sup, S.values[i] / env);
  });
  return sup;
}

GreenUpperBoundAudit audit_green_upper_bound(const SymField& S, const LongRangeParams& params,
                                             double trusted_frac) {
  const double a2 = params.alpha2();
  const double La2 = std::pow(params.L, a2);
  const double rmax = trusted_frac * S.box.M;
  const int nshell = 24;
  std::vector<double> shell_sum(nshell, 0.0), shell_cnt(nshell, 0.0);
  const double lo = std::log(std::max(2.0, params.L));
  const double hi = std::log(rmax);
  GreenUpperBoundAudit audit;
  if (!(hi > lo)) return audit;

  for_each_octant(S.box, [&](std::size_t i, std::span<const int> x, double mult) {
    if (i == 0) return; // delta subtracted
    const double rho = euclid_norm(x);
    if (rho < std::exp(lo) || rho > rmax) return;
    const double corr = params.alpha == 2.0 ? log_reg_norm_rho(rho, params.L) : 1.0;
    const double ratio =
        S.values[i] * std::pow(reg_norm_rho(rho, params.L), params.d - a2) * La2 * corr;
    audit.max_ratio = std::max(audit.max_ratio, ratio);
    const int b = std::min(nshell - 1,
                           static_cast<int>(nshell * (std::log(rho) - lo) / (hi - lo)));
    shell_sum[b] += mult * ratio;
    shell_cnt[b] += mult;
  });

  std::vector<double> rad, val;
  for (int b = 0; b < nshell; ++b) {
    if (shell_cnt[b] == 0.0) continue;
    rad.push_back(std::exp(lo + (b + 0.5) * (hi - lo) / nshell));
    val.push_back(shell_sum[b] / shell_cnt[b]);
  }
  audit.shells = static_cast<int>(rad.size());
  audit.trend_slope = shell_trend(rad, val);
  audit.pass = audit.shells >= 6 && std::isfinite(audit.max_ratio) &&
               audit.trend_slope <= 0.02;
  return audit;
}

GreenAsymptoticsAudit audit_green_asymptotics(const SymField& S1,
                                              const AsymptoticConstants& constants,
                                              const LongRangeParams& params,
                                              double tolerance, double trusted_frac) {
  const int d = S1.box.d;
  const double a2 = params.alpha2();
  const double amp = constants.gamma_alpha / constants.v_alpha;
  GreenAsymptoticsAudit audit;
  if (!(amp > 0.0)) return audit;

  const double x_lo = 2.0 * params.L * params.L;
  const double x_hi = trusted_frac * S1.box.M;
  if (!(x_hi > x_lo * 1.2)) return audit;

  std::vector<int> site(d);
  for (double r = x_lo; r <= x_hi; r *= 1.12246) { // 2^(1/6) steps
    for (int dir = 0; dir < 2; ++dir) {
      double xnorm;
      if (dir == 0) {
        std::fill(site.begin(), site.end(), 0);
        site[0] = static_cast<int>(std::lround(r));
        xnorm = site[0];
      } else {
        const int c = static_cast<int>(std::lround(r / std::sqrt(static_cast<double>(d))));
        if (c < 1) continue;
        std::fill(site.begin(), site.end(), c);
        xnorm = c * std::sqrt(static_cast<double>(d));
      }
      if (xnorm < x_lo || xnorm > x_hi) continue;
      AsymptoticsRow row;
      row.xnorm = xnorm;
      row.direction = dir;
      row.S1 = S1.at_abs(site);
      const double lx = std::log(xnorm);
      row.ratio_nolog = row.S1 * std::pow(xnorm, d - a2) / amp;
      row.ratio = params.alpha == 2.0 ? row.ratio_nolog * lx : row.ratio_nolog;
      audit.rows.push_back(row);
    }
  }
  if (audit.rows.size() < 6) return audit;

  std::sort(audit.rows.begin(), audit.rows.end(),
            [](const AsymptoticsRow& a, const AsymptoticsRow& b) { return a.xnorm < b.xnorm; });

  for (std::size_t i = 0; i + 1 < audit.rows.size(); ++i) {
    const auto& a = audit.rows[i];
    const auto& b = audit.rows[i + 1];
    if (a.direction != b.direction && std::abs(a.xnorm - b.xnorm) < 0.25 * a.xnorm)
      audit.anisotropy = std::max(audit.anisotropy, std::abs(a.ratio / b.ratio - 1.0));
  }

  const int K = 4;
  const double llo = std::log(audit.rows.front().xnorm) - 1e-9;
  const double lhi = std::log(audit.rows.back().xnorm) + 1e-9;
  std::vector<double> wsum(K, 0.0), wcnt(K, 0.0), wsum_nolog(K, 0.0), wdev(K, 0.0);
  double running = 0.0, rcount = 0.0;
  for (auto& row : audit.rows) {
    const int b =
        std::min(K - 1, static_cast<int>(K * (std::log(row.xnorm) - llo) / (lhi - llo)));
    wsum[b] += row.ratio;
    wsum_nolog[b] += row.ratio_nolog;
    wdev[b] += std::abs(row.ratio - 1.0);
    wcnt[b] += 1.0;
    running += row.ratio;
    rcount += 1.0;
    row.window_mean = running / rcount;
  }
  for (int b = 0; b < K; ++b) {
    if (wcnt[b] == 0.0) continue;
    audit.window_means.push_back(wsum[b] / wcnt[b]);
    audit.window_means_nolog.push_back(wsum_nolog[b] / wcnt[b]);
    audit.window_abs_dev.push_back(wdev[b] / wcnt[b]);
  }
  if (audit.window_means.size() < 3) return audit;

  audit.final_mean = audit.window_means.back();
  audit.abs_dev_decay =
      audit.window_abs_dev.back() / std::max(audit.window_abs_dev.front(), 1e-12);

  audit.monotone_trend = true;
  for (std::size_t i = 1; i < audit.window_abs_dev.size(); ++i)
    if (audit.window_abs_dev[i] > 1.05 * audit.window_abs_dev[i - 1])
      audit.monotone_trend = false;

  audit.pass = std::abs(audit.final_mean - 1.0) <= tolerance && audit.monotone_trend;
  return audit;
}

} // namespace lrlc
