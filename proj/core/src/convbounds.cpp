#include "lrlc/convbounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrlc/field.hpp"
#include "lrlc/numerics.hpp"

namespace lrlc {

namespace {

constexpr double kPi = std::numbers::pi;

// #{z in [-M,M]^(d-1) : |z|^2 = s}, indexed by s.
std::vector<double> shell_counts(int dm1, int M) {
  std::vector<double> cnt(static_cast<std::size_t>(std::max(dm1, 1)) * M * M + 1, 0.0);
  if (dm1 == 0) {
    cnt[0] = 1.0;
    return cnt;
  }
  BoxSpec oct{dm1, M, false};
  for_each_octant(oct, [&](std::size_t, std::span<const int> z, double mult) {
    std::size_t s = 0;
    for (int c : z) s += static_cast<std::size_t>(c) * c;
    cnt[s] += mult;
  });
  return cnt;
}

// Angular mean of F(|x - r w|) over directions w, for radial F.
double angular_mean_F(const ExponentTuple& t, double xnorm, double r) {
  if (xnorm == 0.0) return power_log_term(r, t.L, t.a1, t.a2);
  static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589,
                                 0.4580167776572274, 0.6178762444026438,
                                 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
  static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (double c : {gl_x[i], -gl_x[i]}) {
      const double wgt = gl_w[i] * std::pow(1.0 - c * c, 0.5 * (t.d - 3.0));
      const double dist = std::sqrt(xnorm * xnorm + r * r - 2.0 * xnorm * r * c);
      num += wgt * power_log_term(dist, t.L, t.a1, t.a2);
      den += wgt;
    }
  }
  return num / den;
}

// Tail beyond the box: integral comparison of the full summand with the
// first factor angularly averaged, over r > M (u = log r).
double tail_integral(const ExponentTuple& t, int M, double xnorm) {
  const double kappa = t.a1 + t.b1 - t.d;
  const double logs = t.a2 + t.b2;
  const double sphere = sphere_area(t.d);
  const double u0 = std::log(static_cast<double>(M));
  const double span = kappa > 1e-12 ? std::max(60.0 / kappa, 20.0) : 400.0;
  double tail = sphere * integrate(
                             [&](double u) {
                               const double r = std::exp(u);
                               return std::pow(r, t.d) * power_log_term(r, t.L, t.b1, t.b2) *
                                      angular_mean_F(t, xnorm, r);
                             },
                             u0, u0 + span, 1e-14, 36);
  if (kappa <= 1e-12) {
    // marginal a1 + b1 = d: the log-damped remainder in closed form
    if (logs <= 1.0) return std::numeric_limits<double>::infinity();
    const double shift = std::log(kPi / (2.0 * t.L));
    tail += sphere * std::pow(kPi / 2.0, -(t.a1 + t.b1)) *
            std::pow(u0 + span + shift, 1.0 - logs) / (logs - 1.0);
  }
  return tail;
}

} // namespace

std::string regime_name(ConvRegime r) {
  switch (r) {
    case ConvRegime::A1_gt_d: return "A1_gt_d";
    case ConvRegime::A1_eq_d_A2_eq_1: return "A1_eq_d_A2_eq_1";
    case ConvRegime::A1_eq_d_A2_ne_1: return "A1_eq_d_A2_ne_1";
    case ConvRegime::Interior: return "Interior";
    case ConvRegime::Boundary: return "Boundary";
  }
  return "?";
}

void ExponentTuple::validate() const {
  if (d < 1) throw std::invalid_argument("ExponentTuple: d must be positive");
  if (!(L >= 1.0)) throw std::invalid_argument("ExponentTuple: L must be >= 1");
  if (!(a1 >= b1 && b1 > 0.0))
    throw std::invalid_argument("ExponentTuple: requires a1 >= b1 > 0");
  if (!(a1 + b1 >= d)) throw std::invalid_argument("ExponentTuple: requires a1 + b1 >= d");
  if (!(a2 >= 0.0 && b2 >= 0.0))
    throw std::invalid_argument("ExponentTuple: requires a2, b2 >= 0");
  if (a1 == b1 && !(a2 >= b2))
    throw std::invalid_argument("ExponentTuple: requires a2 >= b2 when a1 = b1");
}

ConvRegime classify_regime(const ExponentTuple& t) {
  t.validate();
  if (t.a1 > t.d) return ConvRegime::A1_gt_d;
  if (t.a1 == t.d) return t.a2 == 1.0 ? ConvRegime::A1_eq_d_A2_eq_1
                                      : ConvRegime::A1_eq_d_A2_ne_1;
  if (t.a1 + t.b1 > t.d) return ConvRegime::Interior;
  if (t.a2 + t.b2 > 1.0) return ConvRegime::Boundary;
  throw std::invalid_argument(
      "classify_regime: a1 < d with a1 + b1 = d requires a2 + b2 > 1");
}

double power_log_term(double rho, double L, double a, double a2) {
  const double reg = reg_norm_rho(rho, L);
  const double lg = log_reg_norm_rho(rho, L);
  return std::pow(reg, -a) * std::pow(lg, -a2);
}

double rhs_envelope(const ExponentTuple& t, double xnorm) {
  const double base = power_log_term(xnorm, t.L, t.b1, t.b2);
  const double reg = reg_norm_rho(xnorm, t.L);
  const double lg = log_reg_norm_rho(xnorm, t.L);
  switch (classify_regime(t)) {
    case ConvRegime::A1_gt_d: return base * std::pow(t.L, t.d - t.a1);
    case ConvRegime::A1_eq_d_A2_eq_1: return base * std::log(lg);
    case ConvRegime::A1_eq_d_A2_ne_1:
      return base * std::pow(lg, std::max(0.0, 1.0 - t.a2));
    case ConvRegime::Interior: return base * std::pow(reg, t.d - t.a1);
    case ConvRegime::Boundary:
      return base * std::pow(reg, t.b1) * std::pow(lg, std::max(0.0, 1.0 - t.a2));
  }
  return base;
}

double brute_force_lhs(const ExponentTuple& t, std::span<const int> x, const BoxSpec& box,
                       bool include_tail) {
  t.validate();
  if (box.d != t.d) throw std::invalid_argument("brute_force_lhs: dimension mismatch");
  const double xnorm = euclid_norm(x);
  if (box.M < 3.0 * xnorm)
    throw std::invalid_argument("brute_force_lhs: box radius must be >= 3|x|");

  bool on_axis = true;
  for (std::size_t j = 1; j < x.size(); ++j)
    if (x[j] != 0) on_axis = false;

  double sum = 0.0;
  if (on_axis) {
    const int x1 = std::abs(x[0]);
    const int M = box.M;
    const std::vector<double> cnt = shell_counts(t.d - 1, M);
    const std::size_t fmax = static_cast<std::size_t>(x1 + M) * (x1 + M) + (cnt.size() - 1);
    const std::size_t gmax = static_cast<std::size_t>(M) * M + (cnt.size() - 1);
    std::vector<double> F(fmax + 1), G(gmax + 1);
    for (std::size_t s = 0; s <= fmax; ++s)
      F[s] = power_log_term(std::sqrt(static_cast<double>(s)), t.L, t.a1, t.a2);
    for (std::size_t s = 0; s <= gmax; ++s)
      G[s] = power_log_term(std::sqrt(static_cast<double>(s)), t.L, t.b1, t.b2);
    const std::size_t ball = static_cast<std::size_t>(M) * M; // |y|^2 <= M^2
    for (long y1 = -M; y1 <= M; ++y1) {
      const std::size_t dx2 = static_cast<std::size_t>(std::labs(x1 - y1)) * std::labs(x1 - y1);
      const std::size_t dy2 = static_cast<std::size_t>(std::labs(y1)) * std::labs(y1);
      if (dy2 > ball) continue;
      const std::size_t smax = ball - dy2;
      double row = 0.0;
      for (std::size_t s = 0; s < cnt.size() && s <= smax; ++s) {
        if (cnt[s] == 0.0) continue;
        row += cnt[s] * F[dx2 + s] * G[dy2 + s];
      }
      sum += row;
    }
  } else {
    if (box.volume() > 20'000'000)
      throw std::invalid_argument("brute_force_lhs: off-axis x needs a small box");
    std::vector<int> y(box.d);
    const std::size_t V = box.volume();
    const double ball = static_cast<double>(box.M) * box.M;
    for (std::size_t i = 0; i < V; ++i) {
      site_coords(box, i, y);
      double dy2 = 0.0, dx2 = 0.0;
      for (int j = 0; j < box.d; ++j) {
        dy2 += static_cast<double>(y[j]) * y[j];
        const double dj = x[j] - y[j];
        dx2 += dj * dj;
      }
      if (dy2 > ball) continue;
      sum += power_log_term(std::sqrt(dx2), t.L, t.a1, t.a2) *
             power_log_term(std::sqrt(dy2), t.L, t.b1, t.b2);
    }
  }

  if (include_tail) sum += tail_integral(t, box.M, xnorm);
  return sum;
}

std::vector<Site> default_x_samples(const ExponentTuple& t, const BoxSpec& box) {
  std::vector<Site> xs;
  const double lo = 4.0 * t.L;
  const double hi = box.M / 3.0;
  for (double r = lo; r <= hi; r *= std::numbers::sqrt2) {
    Site s(t.d, 0);
    s[0] = static_cast<int>(std::lround(r));
    xs.push_back(std::move(s));
  }
  return xs;
}

ConvBoundReport verify_bound(const ExponentTuple& t, const std::vector<Site>& x_samples,
                             const BoxSpec& box) {
  ConvBoundReport rep;
  rep.regime = classify_regime(t);
  if (x_samples.size() < 2)
    throw std::invalid_argument("verify_bound: need at least two x samples");
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& x : x_samples) {
      const double r = euclid_norm(x);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (hi < 8.0 * lo) // sqrt(2)-spaced samples reach 8x and beyond
      throw std::invalid_argument("verify_bound: x samples must span a decade of |x|");
  }

  for (const auto& x : x_samples) {
    ConvBoundRow row;
    row.xnorm = euclid_norm(x);
    row.lhs = brute_force_lhs(t, x, box);
    row.rhs = rhs_envelope(t, row.xnorm);
    row.ratio = row.lhs / row.rhs;
    rep.empirical_C = std::max(rep.empirical_C, row.ratio);
    rep.table.push_back(row);
  }

  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t i = rep.table.size() / 2; i < rep.table.size(); ++i) {
      const double lx = std::log(rep.table[i].xnorm);
      const double ly = std::log(rep.table[i].ratio);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      n += 1;
    }
    rep.trend_slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  }

  // L-independence: rerun at 2L over the same samples (where still >= 4*2L)
  {
    ExponentTuple t2 = t;
    t2.L = 2.0 * t.L;
    for (const auto& x : x_samples) {
      const double xn = euclid_norm(x);
      if (xn < 4.0 * t2.L) continue;
      const double lhs = brute_force_lhs(t2, x, box);
      const double rhs = rhs_envelope(t2, xn);
      rep.empirical_C_2L = std::max(rep.empirical_C_2L, lhs / rhs);
    }
    rep.L_shift = std::abs(rep.empirical_C_2L / rep.empirical_C - 1.0);
  }

  rep.pass = rep.trend_slope <= 0.02 && rep.L_shift < 0.20;
  return rep;
}

} // namespace lrlc
