#include "lrlc/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lrlc {

namespace {

constexpr int kTile = 64;

// Batched 1-D r2c plans, one per line length N. Input tiles are laid out with
// the transform index strided by kTile so FFTW can vectorize across lines.
struct LinePlan {
  int N;
  double* in;          // N x kTile reals
  fftw_complex* out;   // (N/2+1) x kTile
  fftw_plan plan;
};

LinePlan& plan_for(int N) {
  static std::map<int, LinePlan> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  LinePlan p;
  p.N = N;
  p.in = fftw_alloc_real(static_cast<std::size_t>(N) * kTile);
  p.out = fftw_alloc_complex(static_cast<std::size_t>(N / 2 + 1) * kTile);
  const int n[1] = {N};
  p.plan = fftw_plan_many_dft_r2c(1, n, kTile, p.in, nullptr, kTile, 1,
                                  p.out, nullptr, kTile, 1, FFTW_MEASURE);
  if (!p.plan) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(N, p).first->second;
}

// One in-place symmetric-DFT pass along dimension `dim` of the octant array.
// Lines (stride B) are batched kTile at a time across the combined (a, b)
// index so no batch slot is wasted when B is small.
void sym_pass(SymField& f, int dim) {
  const int M = f.box.M;
  if (M == 0) return;
  const int n = M + 1;
  const int N = 2 * M + 1;
  LinePlan& lp = plan_for(N);

  std::size_t A = 1, B = 1;
  for (int i = 0; i < dim; ++i) A *= n;
  for (int i = dim + 1; i < f.box.d; ++i) B *= n;
  const std::size_t lines = A * B;

  double* data = f.values.data();
  std::size_t bases[kTile];
  for (std::size_t l0 = 0; l0 < lines; l0 += kTile) {
    const int nb = static_cast<int>(std::min<std::size_t>(kTile, lines - l0));
    const std::size_t b0 = l0 % B;
    const bool contiguous = b0 + nb <= B; // all lines in one slab
    if (contiguous) {
      const double* slab = data + (l0 / B) * n * B + b0;
      for (int j = 0; j < n; ++j) {
        const double* src = slab + static_cast<std::size_t>(j) * B;
        double* row = lp.in + static_cast<std::size_t>(j) * kTile;
        for (int t = 0; t < nb; ++t) row[t] = src[t];
        for (int t = nb; t < kTile; ++t) row[t] = 0.0;
        if (j > 0)
          std::memcpy(lp.in + static_cast<std::size_t>(N - j) * kTile, row,
                      sizeof(double) * kTile);
      }
    } else {
      for (int t = 0; t < nb; ++t) {
        const std::size_t l = l0 + t;
        bases[t] = (l / B) * n * B + (l % B);
      }
      for (int j = 0; j < n; ++j) {
        double* row = lp.in + static_cast<std::size_t>(j) * kTile;
        for (int t = 0; t < nb; ++t) row[t] = data[bases[t] + static_cast<std::size_t>(j) * B];
        for (int t = nb; t < kTile; ++t) row[t] = 0.0;
        if (j > 0)
          std::memcpy(lp.in + static_cast<std::size_t>(N - j) * kTile, row,
                      sizeof(double) * kTile);
      }
    }
    fftw_execute(lp.plan);
    if (contiguous) {
      double* slab = data + (l0 / B) * n * B + b0;
      for (int j = 0; j < n; ++j) {
        double* dst = slab + static_cast<std::size_t>(j) * B;
        const fftw_complex* row = lp.out + static_cast<std::size_t>(j) * kTile;
        for (int t = 0; t < nb; ++t) dst[t] = row[t][0];
      }
    } else {
      for (int j = 0; j < n; ++j) {
        const fftw_complex* row = lp.out + static_cast<std::size_t>(j) * kTile;
        for (int t = 0; t < nb; ++t) data[bases[t] + static_cast<std::size_t>(j) * B] = row[t][0];
      }
    }
  }
}

} // namespace

void sym_dft_forward(SymField& f) {
  for (int i = 0; i < f.box.d; ++i) sym_pass(f, i);
}

void sym_dft_inverse(SymField& f) {
  for (int i = 0; i < f.box.d; ++i) sym_pass(f, i);
  const double scale = std::pow(static_cast<double>(f.box.side()), -f.box.d);
  for (double& v : f.values) v *= scale;
}

SymField circ_convolve(const SymField& f, const SymField& g) {
  if (!(f.box == g.box)) throw std::invalid_argument("circ_convolve: box mismatch");
  SymField fh = f, gh = g;
  sym_dft_forward(fh);
  sym_dft_forward(gh);
  for (std::size_t i = 0; i < fh.values.size(); ++i) fh.values[i] *= gh.values[i];
  sym_dft_inverse(fh);
  return fh;
}

double SpectralField::max_imag_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

namespace {

// Centered <-> wrapped layout plus a full-box c2c FFT. Only used on small
// boxes (the public transform of arbitrary LatticeFields); heavy work goes
// through the octant path.
void full_fft(const BoxSpec& box, std::vector<std::complex<double>>& centered, int sign) {
  const std::size_t V = box.volume();
  const int N = box.side();
  std::vector<int> dims(box.d, N);
  fftw_complex* buf = fftw_alloc_complex(V);

  // centered index -> wrapped index: w = (c - M) mod N per coordinate
  std::vector<int> c(box.d);
  for (std::size_t i = 0; i < V; ++i) {
    site_coords(box, i, c);
    std::size_t w = 0;
    for (int j = 0; j < box.d; ++j) w = w * N + static_cast<std::size_t>((c[j] + N) % N);
    buf[w][0] = centered[i].real();
    buf[w][1] = centered[i].imag();
  }
  fftw_plan plan = fftw_plan_dft(box.d, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  for (std::size_t i = 0; i < V; ++i) {
    site_coords(box, i, c);
    std::size_t w = 0;
    for (int j = 0; j < box.d; ++j) w = w * N + static_cast<std::size_t>((c[j] + N) % N);
    centered[i] = {buf[w][0], buf[w][1]};
  }
  fftw_free(buf);
}

} // namespace

SpectralField dft_forward(const LatticeField& f) {
  SpectralField out(f.box);
  for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = f.values[i];
  // fhat(k) = sum_x e^{+ik.x} f(x)  ->  FFTW_BACKWARD exponent
  full_fft(f.box, out.values, FFTW_BACKWARD);
  return out;
}

LatticeField dft_inverse(const SpectralField& fh, double* max_imag) {
  std::vector<std::complex<double>> work = fh.values;
  full_fft(fh.box, work, FFTW_FORWARD);
  LatticeField out(fh.box);
  const double scale = std::pow(static_cast<double>(fh.box.side()), -fh.box.d);
  double mi = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    out.values[i] = work[i].real() * scale;
    mi = std::max(mi, std::abs(work[i].imag()) * scale);
  }
  if (max_imag) *max_imag = mi;
  return out;
}

LatticeField direct_convolve_torus(const LatticeField& f, const LatticeField& g) {
  if (!(f.box == g.box)) throw std::invalid_argument("direct_convolve: box mismatch");
  const BoxSpec& box = f.box;
  const std::size_t V = box.volume();
  const int N = box.side();
  LatticeField out(box);
  std::vector<int> x(box.d), y(box.d), z(box.d);
  for (std::size_t ix = 0; ix < V; ++ix) {
    site_coords(box, ix, x);
    double s = 0.0;
    for (std::size_t iy = 0; iy < V; ++iy) {
      site_coords(box, iy, y);
      for (int j = 0; j < box.d; ++j) {
        int t = x[j] - y[j];
        if (t > box.M) t -= N;
        if (t < -box.M) t += N;
        z[j] = t;
      }
      s += f.values[iy] * g.values[site_index(box, z)];
    }
    out.values[ix] = s;
  }
  return out;
}

LatticeField direct_convolve_linear(const LatticeField& f, const LatticeField& g) {
  if (!(f.box == g.box)) throw std::invalid_argument("direct_convolve: box mismatch");
  const BoxSpec& box = f.box;
  const std::size_t V = box.volume();
  LatticeField out(box);
  std::vector<int> x(box.d), y(box.d), z(box.d);
  for (std::size_t ix = 0; ix < V; ++ix) {
    site_coords(box, ix, x);
    double s = 0.0;
    for (std::size_t iy = 0; iy < V; ++iy) {
      site_coords(box, iy, y);
      bool in = true;
      for (int j = 0; j < box.d; ++j) {
        z[j] = x[j] - y[j];
        if (z[j] < -box.M || z[j] > box.M) { in = false; break; }
      }
      if (in) s += f.values[iy] * g.values[site_index(box, z)];
    }
    out.values[ix] = s;
  }
  return out;
}

} // namespace lrlc
