#pragma once

#include <complex>
#include <vector>

#include "lrlc/field.hpp"

namespace lrlc {

// Symmetric (even-in-every-coordinate) DFT on the odd torus of side N = 2M+1.
// A SymField octant stands for the full even field; its transform is again
// even and real:  fhat(k) = sum_x f(x) prod_i cos(2 pi k_i x_i / N).
// forward is unnormalized; inverse divides by N^d, so inverse(forward(f)) = f.
// Both run in place; scratch is O(N x tile) regardless of field size.
void sym_dft_forward(SymField& f);
void sym_dft_inverse(SymField& f);

// Circular convolution on the odd torus for even fields: ifft(fhat * ghat).
SymField circ_convolve(const SymField& f, const SymField& g);

// Dense complex field on the dual grid k = 2 pi n / (2M+1), n in the box,
// stored in the same centered lexicographic order as LatticeField sites.
struct SpectralField {
  BoxSpec box;
  std::vector<std::complex<double>> values;

  SpectralField() = default;
  explicit SpectralField(const BoxSpec& b) : box(b), values(b.volume()) {}

  std::complex<double> at_zero() const { return values[(values.size() - 1) / 2]; }
  double max_imag_abs() const;
};

// Full-box DFT with the e^{+ik.x} sign convention on the forward side.
SpectralField dft_forward(const LatticeField& f);
LatticeField dft_inverse(const SpectralField& f, double* max_imag = nullptr);

// Reference O(V^2) convolutions for oracles and small boxes.
LatticeField direct_convolve_torus(const LatticeField& f, const LatticeField& g);
LatticeField direct_convolve_linear(const LatticeField& f, const LatticeField& g);

} // namespace lrlc
