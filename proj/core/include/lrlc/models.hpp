#pragma once

#include <cstdint>
#include <vector>

#include "lrlc/field.hpp"

namespace lrlc {

// Exact self-avoiding-walk series: G_p(x) = sum_n c_n(x) p^n with c_n the
// weighted count of n-step self-avoiding paths o -> x inside the box.
struct SawSeries {
  BoxSpec box;
  int max_length = 0;
  double prune_threshold = 1e-15;
  bool pruned = false; // some paths fell below the weight floor
  std::vector<LatticeField> coefficients; // index n = 0..max_length
};

// Depth-first enumeration with visited-site masks and weight pruning.
// A pre-flight node-count estimate rejects intractable (N, box) pairs.
SawSeries saw_enumerate(const LatticeField& D, int N, const BoxSpec& box,
                        double prune = 1e-15);

struct SawTwoPoint {
  LatticeField G;
  double last_term_share = 0.0; // l1 weight of the last retained term
  bool truncation_warning = false;
};

SawTwoPoint saw_two_point(const SawSeries& series, double p);

// Long-range percolation on the box torus: bond {u, u+dx} open with
// probability p D(dx), connectivity by union-find, all sites used as origins.
struct PercConfig {
  BoxSpec box; // torus
  double p = 0.0;
  long samples = 1000;
  std::uint64_t seed = 1;
};

struct PercEstimate {
  LatticeField G;      // connection probability estimate, G(o) = 1
  LatticeField stderr_; // binomial standard errors
  double mean_open_bonds = 0.0;
};

PercEstimate percolation_two_point(const SymField& D, const PercConfig& cfg);

// Exact Ising two-point function on a volume of at most 24 sites, couplings
// solved from tanh(beta J_{o,x}) = p D(x), free boundary, full 2^|V| sum.
struct IsingConfig {
  std::vector<Site> volume;
  double beta = 1.0;
  double p = 0.5; // = sum_x tanh(beta J_{o,x})
};

struct IsingResult {
  std::vector<double> corr; // <phi_o phi_x>, aligned with cfg.volume
  double partition_log = 0.0;
};

IsingResult ising_two_point_exact(const SymField& D, const IsingConfig& cfg);

double susceptibility(const LatticeField& G);
double susceptibility(const SymField& G);

// bubble = sum_x G(x)^2, triangle = (G*G*G)(o) via the dual-grid cube sum.
struct BubbleTriangle {
  double bubble = 0.0;
  double triangle = 0.0;
};

BubbleTriangle bubble_triangle(const SymField& G);

} // namespace lrlc
