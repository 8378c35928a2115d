#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lrlc/field.hpp"
#include "lrlc/transform.hpp"

using namespace lrlc;

namespace {

SymField random_sym(const BoxSpec& box, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymField f(box);
  for (double& v : f.values) v = u(gen);
  return f;
}

// Brute-force symmetric DFT straight from the definition.
SymField brute_sym_dft(const SymField& f) {
  const BoxSpec& box = f.box;
  const int N = box.side();
  SymField out(box);
  std::vector<int> k(box.d), x(box.d);
  for (std::size_t ik = 0; ik < out.values.size(); ++ik) {
    octant_coords(box, ik, k);
    double s = 0.0;
    for_each_octant(box, [&](std::size_t ix, std::span<const int> xc, double) {
      double w = 1.0;
      for (int j = 0; j < box.d; ++j) {
        if (xc[j] == 0)
          w *= 1.0;
        else
          w *= 2.0 * std::cos(2.0 * std::numbers::pi * k[j] * xc[j] / N);
      }
      s += f.values[ix] * w;
    });
    out.values[ik] = s;
  }
  return out;
}

} // namespace

TEST_CASE("sym DFT matches brute-force definition") {
  for (auto [d, M] : {std::pair{1, 4}, {2, 3}, {3, 2}}) {
    BoxSpec box{d, M, true};
    SymField f = random_sym(box, 11 + d);
    SymField got = f;
    sym_dft_forward(got);
    SymField want = brute_sym_dft(f);
    for (std::size_t i = 0; i < got.values.size(); ++i)
      CHECK(got.values[i] == doctest::Approx(want.values[i]).epsilon(1e-11));
  }
}

TEST_CASE("sym DFT inverse round trip") {
  BoxSpec box{3, 5, true};
  SymField f = random_sym(box, 5);
  SymField g = f;
  sym_dft_forward(g);
  sym_dft_inverse(g);
  double err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    err = std::max(err, std::abs(f.values[i] - g.values[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("sym DFT of delta is 1, value at k=0 is the full-box sum") {
  BoxSpec box{2, 4, true};
  SymField f(box);
  f.values[0] = 1.0; // delta at the origin
  SymField g = f;
  sym_dft_forward(g);
  for (double v : g.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

  SymField h = random_sym(box, 3);
  const double total = h.sum();
  sym_dft_forward(h);
  CHECK(h.values[0] == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("circular convolution via spectra matches direct torus sum") {
  BoxSpec box{2, 3, true};
  SymField a = random_sym(box, 1), b = random_sym(box, 2);
  SymField c = circ_convolve(a, b);
  LatticeField cf = direct_convolve_torus(a.to_full(), b.to_full());
  LatticeField cu = c.to_full();
  for (std::size_t i = 0; i < cf.values.size(); ++i)
    CHECK(cu.values[i] == doctest::Approx(cf.values[i]).epsilon(1e-11));
}

TEST_CASE("full-box DFT: delta, normalization, symmetry, round trip") {
  BoxSpec box{2, 3, false};
  LatticeField f(box);
  std::vector<int> o{0, 0};
  f.at(o) = 1.0;
  SpectralField fh = dft_forward(f);
  for (auto& v : fh.values) {
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-13);
  }

  std::mt19937 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LatticeField g(box);
  for (double& v : g.values) v = u(gen);
  SpectralField gh = dft_forward(g);
  CHECK(gh.at_zero().real() == doctest::Approx(g.sum()).epsilon(1e-12));
  double mi = 0.0;
  LatticeField back = dft_inverse(gh, &mi);
  for (std::size_t i = 0; i < g.values.size(); ++i)
    CHECK(back.values[i] == doctest::Approx(g.values[i]).epsilon(1e-12));
}

TEST_CASE("Parseval on the full box") {
  BoxSpec box{2, 4, false};
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeField g(box);
  for (double& v : g.values) v = u(gen);
  SpectralField gh = dft_forward(g);
  double lhs = 0.0;
  for (double v : g.values) lhs += v * v;
  double rhs = 0.0;
  for (auto& v : gh.values) rhs += std::norm(v);
  rhs /= static_cast<double>(box.volume());
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("symmetric DFT of even full field equals full DFT on the octant") {
  BoxSpec box{2, 3, false};
  SymField f = random_sym(box, 21);
  LatticeField full = f.to_full();
  SpectralField fh = dft_forward(full);
  CHECK(fh.max_imag_abs() < 1e-12);
  SymField g = f;
  sym_dft_forward(g);
  LatticeField gu = g.to_full(); // spectra are even too
  for (std::size_t i = 0; i < fh.values.size(); ++i)
    CHECK(fh.values[i].real() == doctest::Approx(gu.values[i]).epsilon(1e-11));
}
