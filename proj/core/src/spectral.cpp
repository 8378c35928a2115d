#include "lrlc/spectral.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrlc/numerics.hpp"

namespace lrlc {

namespace {

constexpr double kPi = std::numbers::pi;

// Solve the n x n normal equations A x = b in place (n <= 4).
void solve_normal(int n, double A[4][4], double b[4], double x[4]) {
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    for (int j = 0; j < n; ++j) std::swap(A[c][j], A[piv][j]);
    std::swap(b[c], b[piv]);
    if (std::abs(A[c][c]) < 1e-300) throw std::runtime_error("singular fit matrix");
    for (int r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (int j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= A[r][j] * x[j];
    x[r] = s / A[r][r];
  }
}

} // namespace

SpectralField fourier_transform(const LatticeField& f) {
  SpectralField fh = dft_forward(f);
  double l1 = 0.0;
  for (double v : f.values) l1 += std::abs(v);
  const double floor_ = 1e-12 * std::max(l1, 1.0);
  for (auto& v : fh.values)
    if (std::abs(v.imag()) < floor_) v = {v.real(), 0.0};
  return fh;
}

LatticeField inverse_fourier_transform(const SpectralField& fh) {
  return dft_inverse(fh, nullptr);
}

double compute_gamma(int d, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("compute_gamma: alpha must be > 0");
  const double a2 = std::min(alpha, 2.0);
  if (!(d > a2)) throw std::invalid_argument("compute_gamma: requires d > alpha /\\ 2");
  return std::tgamma(0.5 * (d - a2)) /
         (std::pow(2.0, a2) * std::pow(kPi, 0.5 * d) * std::tgamma(0.5 * a2));
}

double SmallKFit::eval(double r) const {
  if (log_form) {
    const double lnr = std::log(kPi / (2.0 * L * r));
    double m = r * r * (v * lnr + c0);
    if (quartic) m += r * r * r * r * (c2 * lnr + c3);
    return m;
  }
  double m = std::pow(r, a) * (v + c0 * r * r);
  if (quartic) m += std::pow(r, a) * r * r * r * r * c2;
  return m;
}

double SmallKFit::positive_up_to() const {
  const int steps = 400;
  for (int i = 1; i <= steps; ++i) {
    const double r = r_hi * i / steps;
    if (!(eval(r) > 0.0)) return r_hi * (i - 1) / static_cast<double>(steps);
  }
  return r_hi;
}

SmallKFit fit_small_k(const SymField& Dhat, const LongRangeParams& params, bool quartic) {
  SmallKFit fit;
  fit.d = params.d;
  fit.L = params.L;
  fit.a = params.alpha2();
  fit.log_form = params.alpha == 2.0;
  fit.quartic = quartic;

  const int N = Dhat.box.side();
  const double kmin = 2.0 * kPi / N;
  double r_hi = std::min(0.7 / params.L, kPi / 4.0);
  // make sure the window holds enough shells to be a fit at all
  while (r_hi < 6.0 * kmin && r_hi < kPi / 2.0) r_hi *= 1.5;
  fit.r_lo = kmin;
  fit.r_hi = r_hi;

  const int nb = quartic ? (fit.log_form ? 4 : 3) : 2;
  double A[4][4] = {};
  double b[4] = {};
  std::size_t npts = 0;
  std::vector<double> kv(params.d);
  for_each_octant(Dhat.box, [&](std::size_t i, std::span<const int> n, double mult) {
    if (i == 0) return;
    double k2 = 0.0;
    for (int j = 0; j < params.d; ++j) {
      kv[j] = 2.0 * kPi * n[j] / N;
      k2 += kv[j] * kv[j];
    }
    const double r = std::sqrt(k2);
    if (r > r_hi) return;
    const double z = 1.0 - Dhat.values[i]; // regress z/r^a on the basis
    double basis[4];
    if (fit.log_form) {
      const double lnr = std::log(kPi / (2.0 * params.L * r));
      basis[0] = lnr;
      basis[1] = 1.0;
      basis[2] = r * r * lnr;
      basis[3] = r * r;
    } else {
      basis[0] = 1.0;
      basis[1] = r * r;
      basis[2] = r * r * r * r;
      basis[3] = 0.0;
    }
    const double y = z / std::pow(r, fit.a);
    const double w = mult * std::pow(r, -(params.d - 1.0)); // balance shell density
    for (int p = 0; p < nb; ++p) {
      for (int q = 0; q < nb; ++q) A[p][q] += w * basis[p] * basis[q];
      b[p] += w * basis[p] * y;
    }
    ++npts;
  });
  if (npts < static_cast<std::size_t>(nb + 2)) return fit; // unusable

  double x[4] = {};
  try {
    solve_normal(nb, A, b, x);
  } catch (const std::runtime_error&) {
    return fit;
  }
  fit.v = x[0];
  fit.c0 = x[1];
  fit.c2 = x[2];
  fit.c3 = x[3];

  double res = 0.0;
  for_each_octant(Dhat.box, [&](std::size_t i, std::span<const int> n, double) {
    if (i == 0) return;
    double k2 = 0.0;
    for (int j = 0; j < params.d; ++j) {
      const double kj = 2.0 * kPi * n[j] / N;
      k2 += kj * kj;
    }
    const double r = std::sqrt(k2);
    if (r > r_hi) return;
    const double z = 1.0 - Dhat.values[i];
    if (z > 0.0) res = std::max(res, std::abs(fit.eval(r) / z - 1.0));
  });
  fit.max_rel_residual = res;
  fit.usable = fit.v > 0.0;
  return fit;
}

AsymptoticConstants estimate_v(const SymField& D, const LongRangeParams& params) {
  params.validate();
  const int N = D.box.side();
  const double kmin = 2.0 * kPi / N;
  if (kmin > 1.0 / (4.0 * params.L))
    throw std::invalid_argument(
        "estimate_v: box does not resolve the |k| window below 1/L (need k_min <= 1/4L)");

  SymField Dhat = D;
  sym_dft_forward(Dhat);
  SmallKFit fit = fit_small_k(Dhat, params, /*quartic=*/false);

  AsymptoticConstants out;
  const double a2 = params.alpha2();
  if (params.d > a2) out.gamma_alpha = compute_gamma(params.d, params.alpha);
  out.v_alpha = fit.v;
  out.c0 = fit.c0;
  out.fit_window_lo = fit.r_lo;
  out.fit_window_hi = fit.r_hi;
  out.fit_residual = fit.max_rel_residual;
  out.pass = fit.usable && fit.max_rel_residual < 0.05;

  if (params.alpha != 2.0) {
    // report-only: empirical correction exponent of z(r) = v + b r^e
    double best_e = 0.0, best_sse = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> pts; // (r, z/r^a)
    std::vector<double> kv(params.d);
    for_each_octant(Dhat.box, [&](std::size_t i, std::span<const int> n, double) {
      if (i == 0) return;
      double k2 = 0.0;
      for (int j = 0; j < params.d; ++j) {
        kv[j] = 2.0 * kPi * n[j] / N;
        k2 += kv[j] * kv[j];
      }
      const double r = std::sqrt(k2);
      if (r > fit.r_hi) return;
      pts.emplace_back(r, (1.0 - Dhat.values[i]) / std::pow(r, a2));
    });
    for (double e = 0.25; e <= 3.01; e += 0.25) {
      double sxx = 0, sxy = 0, sx = 0, sy = 0, cnt = 0;
      for (auto& [r, y] : pts) {
        const double xr = std::pow(r, e);
        sxx += xr * xr;
        sxy += xr * y;
        sx += xr;
        sy += y;
        cnt += 1;
      }
      const double det = cnt * sxx - sx * sx;
      if (std::abs(det) < 1e-300) continue;
      const double bcoef = (cnt * sxy - sx * sy) / det;
      const double acoef = (sy - bcoef * sx) / cnt;
      double sse = 0;
      for (auto& [r, y] : pts) {
        const double mv = acoef + bcoef * std::pow(r, e);
        sse += (y - mv) * (y - mv);
      }
      if (sse < best_sse) {
        best_sse = sse;
        best_e = e;
      }
    }
    out.correction_exponent = best_e;
  }
  return out;
}

AssumptionAudit audit_assumption_hatD(const SymField& D, const LongRangeParams& params) {
  params.validate();
  SymField Dhat = D;
  sym_dft_forward(Dhat);

  const int N = D.box.side();
  const double a2 = params.alpha2();
  AssumptionAudit audit;
  audit.delta_hat = std::numeric_limits<double>::infinity();
  audit.small_k_ratio_min = std::numeric_limits<double>::infinity();
  audit.small_k_ratio_max = 0.0;

  std::vector<double> kv(params.d);
  for_each_octant(D.box, [&](std::size_t i, std::span<const int> n, double) {
    if (i == 0) return; // 1 - Dhat(0) = 0 is excluded from the |k| > 1/L check
    double k2 = 0.0;
    for (int j = 0; j < params.d; ++j) {
      kv[j] = 2.0 * kPi * n[j] / N;
      k2 += kv[j] * kv[j];
    }
    const double r = std::sqrt(k2);
    const double z = 1.0 - Dhat.values[i];
    audit.max_one_minus_dhat = std::max(audit.max_one_minus_dhat, z);
    if (r > 1.0 / params.L) {
      audit.delta_hat = std::min(audit.delta_hat, z);
    } else {
      const double corr = params.alpha == 2.0 ? std::log(kPi / (2.0 * params.L * r)) : 1.0;
      const double ratio = z / (std::pow(params.L * r, a2) * corr);
      audit.small_k_ratio_min = std::min(audit.small_k_ratio_min, ratio);
      audit.small_k_ratio_max = std::max(audit.small_k_ratio_max, ratio);
      ++audit.small_k_points;
    }
  });

  if (params.alpha == 2.0) {
    SmallKFit fit = fit_small_k(Dhat, params, /*quartic=*/false);
    audit.asy_v = fit.v;
    audit.asy_c0 = fit.c0;
    audit.asy_residual = fit.max_rel_residual;
  }

  audit.pass = true;
  if (!(audit.delta_hat > 0.0 && audit.delta_hat < 1.0)) {
    audit.pass = false;
    audit.fail_reason = "empirical Delta outside (0,1)";
  } else if (!(audit.max_one_minus_dhat < 2.0 - audit.delta_hat)) {
    audit.pass = false;
    audit.fail_reason = "1 - Dhat reaches 2 - Delta";
  } else if (audit.small_k_points == 0) {
    audit.pass = false;
    audit.fail_reason = "no dual points resolve |k| <= 1/L";
  } else if (!(audit.small_k_ratio_min > 0.0) ||
             audit.small_k_ratio_max / audit.small_k_ratio_min > 50.0) {
    audit.pass = false;
    audit.fail_reason = "small-k ratio window unbounded or touching zero";
  }
  return audit;
}

double compute_delta_m(const SymField& D, int m, const LongRangeParams& params) {
  if (m != 2 && m != 3) throw std::invalid_argument("compute_delta_m: m must be 2 or 3");
  SymField Dhat = D;
  sym_dft_forward(Dhat);

  const int N = D.box.side();
  const double Vd = std::pow(static_cast<double>(N), params.d);
  double quad = 0.0;
  double min_z = std::numeric_limits<double>::infinity();
  for_each_octant(D.box, [&](std::size_t i, std::span<const int>, double mult) {
    if (i == 0) return;
    const double dh = Dhat.values[i];
    const double z = 1.0 - dh;
    min_z = std::min(min_z, z);
    quad += mult * dh * dh / std::pow(z, m);
  });
  if (!(min_z > 0.0))
    throw std::invalid_argument("compute_delta_m: 1 - Dhat <= 0 off k = 0");
  quad /= Vd;

  // k = 0 cell replaced by the small-k model integral over the equivalent ball.
  SmallKFit fit = fit_small_k(Dhat, params, /*quartic=*/false);
  const double rc = (2.0 * kPi / N) *
                    std::pow(std::tgamma(0.5 * params.d + 1.0), 1.0 / params.d) /
                    std::sqrt(kPi);
  double cell = 0.0;
  if (fit.usable && fit.positive_up_to() >= rc) {
    const double lo = std::log(rc) - 40.0, hi = std::log(rc);
    const double integral = integrate(
        [&](double u) {
          const double r = std::exp(u);
          const double mm = fit.eval(r);
          if (!(mm > 0.0)) return 0.0;
          return std::pow(r, params.d) / std::pow(mm, m);
        },
        lo, hi, 1e-8 * std::max(quad, 1e-20), 40);
    cell = sphere_area(params.d) / std::pow(2.0 * kPi, params.d) * integral;
  } else {
    // coarse fallback: nearest-shell integrand spread over the k = 0 cell
    std::vector<int> e1(params.d, 0);
    e1[params.d - 1] = 1;
    const double z = 1.0 - Dhat.values[octant_index(D.box, e1)];
    cell = 1.0 / (Vd * std::pow(z, m));
  }
  return quad + cell;
}

} // namespace lrlc
