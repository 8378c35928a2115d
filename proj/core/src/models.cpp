#include "lrlc/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lrlc/numerics.hpp"
#include "lrlc/transform.hpp"

namespace lrlc {

namespace {

// Node-count estimate for the pruned DFS: self-convolve the histogram of
// step weights in -log10 units against the prune budget, with the same
// look-ahead bound the walker uses (remaining steps at the best weight).
double preflight_nodes(const std::vector<double>& weights, int N, double prune) {
  const double budget = -std::log10(prune);
  double best = 0.0;
  for (double v : weights) best = std::max(best, v);
  if (best <= 0.0 || N == 0) return 1.0;
  const double cost_min = std::max(0.0, -std::log10(best));
  const int nb = 128;
  const double w = budget / nb;
  std::vector<double> hist(nb, 0.0);
  for (double v : weights) {
    if (v <= 0.0) continue;
    const double cost = -std::log10(v);
    if (cost >= budget) continue;
    hist[static_cast<int>(cost / w)] += 1.0;
  }
  std::vector<double> level(nb, 0.0);
  level[0] = 1.0;
  double total = 1.0;
  for (int depth = 0; depth < N; ++depth) {
    const double allowed = budget - (N - depth - 1) * cost_min;
    const int amax = std::max(0, static_cast<int>(allowed / w));
    std::vector<double> next(nb, 0.0);
    for (int a = 0; a < nb; ++a) {
      if (level[a] == 0.0) continue;
      for (int b = 0; a + b < nb && a + b <= amax; ++b)
        if (hist[b] != 0.0) next[a + b] += level[a] * hist[b];
    }
    level.swap(next);
    for (double v : level) total += v;
    if (total > 1e18) break;
  }
  return total;
}

struct SawWalker {
  const BoxSpec& box;
  std::vector<std::pair<double, std::size_t>> steps; // (weight, site index), desc
  std::vector<std::vector<int>> step_coords;
  std::vector<char> visited;
  std::vector<LatticeField>& coeff;
  std::vector<std::vector<int>> pos_stack;
  double prune;
  double maxw;
  int N;
  bool pruned = false;

  void dfs(std::size_t pos_index, int depth, double w) {
    coeff[depth].values[pos_index] += w;
    if (depth == N) return;
    const double head = w * std::pow(maxw, N - depth - 1);
    const std::vector<int>& u = pos_stack[depth];
    std::vector<int>& t = pos_stack[depth + 1];
    for (std::size_t si = 0; si < steps.size(); ++si) {
      const double dw = steps[si].first;
      if (head * dw < prune) {
        pruned = true;
        break; // sorted: everything after is below the floor too
      }
      const std::vector<int>& s = step_coords[si];
      bool inside = true;
      for (int j = 0; j < box.d; ++j) {
        t[j] = u[j] + s[j];
        if (t[j] < -box.M || t[j] > box.M) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      const std::size_t tgt = site_index(box, t);
      if (visited[tgt]) continue;
      visited[tgt] = 1;
      dfs(tgt, depth + 1, w * dw);
      visited[tgt] = 0;
    }
  }
};

} // namespace

SawSeries saw_enumerate(const LatticeField& D, int N, const BoxSpec& box, double prune) {
  if (!(D.box == box)) throw std::invalid_argument("saw_enumerate: kernel box mismatch");
  if (N < 0) throw std::invalid_argument("saw_enumerate: N must be >= 0");
  const std::size_t V = box.volume();

  const double nodes = preflight_nodes(D.values, N, prune);
  if (nodes > 1e11)
    throw std::invalid_argument("saw_enumerate: pre-flight cost estimate rejects (N, box)");

  SawSeries series;
  series.box = box;
  series.max_length = N;
  series.prune_threshold = prune;
  series.coefficients.assign(N + 1, LatticeField(box));

  SawWalker walker{box,
                   {},
                   {},
                   std::vector<char>(V, 0),
                   series.coefficients,
                   std::vector<std::vector<int>>(N + 2, std::vector<int>(box.d, 0)),
                   prune,
                   0.0,
                   N};
  const std::size_t origin = (V - 1) / 2;
  std::vector<int> s(box.d);
  for (std::size_t i = 0; i < V; ++i) {
    if (i == origin || D.values[i] <= 0.0) continue;
    walker.steps.emplace_back(D.values[i], i);
  }
  std::sort(walker.steps.begin(), walker.steps.end(), std::greater<>());
  walker.step_coords.resize(walker.steps.size(), std::vector<int>(box.d));
  for (std::size_t si = 0; si < walker.steps.size(); ++si)
    site_coords(box, walker.steps[si].second, walker.step_coords[si]);
  walker.maxw = walker.steps.empty() ? 0.0 : walker.steps.front().first;

  walker.visited[origin] = 1;
  walker.dfs(origin, 0, 1.0);
  series.pruned = walker.pruned;
  return series;
}

SawTwoPoint saw_two_point(const SawSeries& series, double p) {
  if (p < 0.0) throw std::invalid_argument("saw_two_point: p must be >= 0");
  SawTwoPoint out;
  out.G = LatticeField(series.box);
  double pn = 1.0;
  double total = 0.0, last = 0.0;
  for (int n = 0; n <= series.max_length; ++n) {
    last = 0.0;
    for (std::size_t i = 0; i < out.G.values.size(); ++i) {
      const double term = pn * series.coefficients[n].values[i];
      out.G.values[i] += term;
      last += term;
    }
    total += last;
    pn *= p;
  }
  out.last_term_share = total > 0.0 ? last / total : 0.0;
  out.truncation_warning = out.last_term_share > 0.01;
  return out;
}

PercEstimate percolation_two_point(const SymField& D, const PercConfig& cfg) {
  if (!cfg.box.torus) throw std::invalid_argument("percolation: box must be a torus");
  if (D.box.d != cfg.box.d || D.box.M != cfg.box.M)
    throw std::invalid_argument("percolation: kernel box mismatch");
  if (cfg.p < 0.0) throw std::invalid_argument("percolation: p must be >= 0");
  if (cfg.p * D.max_value() > 1.0)
    throw std::invalid_argument("percolation: p max D exceeds 1 (bond probability)");
  if (cfg.samples < 1) throw std::invalid_argument("percolation: samples must be >= 1");

  const BoxSpec& box = cfg.box;
  const std::size_t V = box.volume();
  const int N = box.side();
  const std::size_t origin = (V - 1) / 2;

  // displacement classes: one representative of {dx, -dx} per bond family
  LatticeField Dfull = D.to_full();
  struct BondClass {
    std::size_t dx_index;
    double prob;
  };
  std::vector<BondClass> classes;
  for (std::size_t i = origin + 1; i < V; ++i)
    if (Dfull.values[i] > 0.0) classes.push_back({i, cfg.p * Dfull.values[i]});

  std::vector<int> dx(box.d), u(box.d), t(box.d);
  std::vector<std::size_t> parent(V), size_(V);
  std::vector<long long> count(V, 0), count2(V, 0);
  std::vector<long> hits(V);
  double open_bonds = 0.0;

  auto find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };

  for (long smp = 0; smp < cfg.samples; ++smp) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(smp)));
    for (std::size_t i = 0; i < V; ++i) {
      parent[i] = i;
      size_[i] = 1;
    }
    for (const BondClass& b : classes) {
      if (b.prob <= 0.0) continue;
      site_coords(box, b.dx_index, dx);
      const double log1mp = std::log1p(-std::min(b.prob, 1.0 - 1e-16));
      long slot = -1;
      while (true) {
        const double unit = 1.0 - rng.next_unit();
        slot += 1 + static_cast<long>(std::floor(std::log(unit) / log1mp));
        if (slot >= static_cast<long>(V)) break;
        open_bonds += 1;
        const std::size_t uidx = static_cast<std::size_t>(slot);
        site_coords(box, uidx, u);
        for (int c = 0; c < box.d; ++c) {
          int v = u[c] + dx[c];
          if (v > box.M) v -= N;
          if (v < -box.M) v += N;
          t[c] = v;
        }
        std::size_t a = find(uidx), b2 = find(site_index(box, t));
        if (a == b2) continue;
        if (size_[a] < size_[b2]) std::swap(a, b2);
        parent[b2] = a;
        size_[a] += size_[b2];
      }
    }
    // translation invariance: every pair (u, u+x) in a component counts
    std::fill(hits.begin(), hits.end(), 0L);
    std::vector<std::vector<std::size_t>> comps;
    {
      std::vector<long> comp_of(V, -1);
      for (std::size_t i = 0; i < V; ++i) {
        const std::size_t r = find(i);
        if (comp_of[r] < 0) {
          comp_of[r] = static_cast<long>(comps.size());
          comps.emplace_back();
        }
        comps[comp_of[r]].push_back(i);
      }
    }
    for (const auto& comp : comps) {
      for (std::size_t a : comp) {
        site_coords(box, a, u);
        for (std::size_t b : comp) {
          site_coords(box, b, dx);
          for (int c = 0; c < box.d; ++c) {
            int v = dx[c] - u[c];
            if (v > box.M) v -= N;
            if (v < -box.M) v += N;
            t[c] = v;
          }
          hits[site_index(box, t)] += 1;
        }
      }
    }
    for (std::size_t i = 0; i < V; ++i) {
      count[i] += hits[i];
      count2[i] += static_cast<long long>(hits[i]) * hits[i];
    }
  }

  PercEstimate est;
  est.G = LatticeField(box);
  est.stderr_ = LatticeField(box);
  const double denom = static_cast<double>(V) * cfg.samples;
  for (std::size_t i = 0; i < V; ++i) {
    est.G.values[i] = count[i] / denom;
    const double mean_hits = static_cast<double>(count[i]) / cfg.samples;
    const double var =
        std::max(0.0, static_cast<double>(count2[i]) / cfg.samples - mean_hits * mean_hits);
    est.stderr_.values[i] = std::sqrt(var / cfg.samples) / V;
  }
  est.mean_open_bonds = open_bonds / cfg.samples;
  return est;
}

IsingResult ising_two_point_exact(const SymField& D, const IsingConfig& cfg) {
  const int n = static_cast<int>(cfg.volume.size());
  if (n < 1 || n > 24)
    throw std::invalid_argument("ising_two_point_exact: |volume| must be in [1, 24]");
  if (cfg.beta < 0.0) throw std::invalid_argument("ising: beta must be >= 0");

  long origin = -1;
  for (int i = 0; i < n; ++i) {
    bool zero = true;
    for (int c : cfg.volume[i])
      if (c != 0) zero = false;
    if (zero) origin = i;
  }
  if (origin < 0) throw std::invalid_argument("ising: volume must contain the origin");

  // beta J_{u,v} = atanh(p D(v-u)); couplings vanish at beta = 0
  std::vector<double> bJ(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<int> diff(D.box.d);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      for (int c = 0; c < D.box.d; ++c) diff[c] = cfg.volume[b][c] - cfg.volume[a][c];
      if (!D.box.contains(diff))
        throw std::invalid_argument("ising: volume pair outside the kernel box");
      const double pd = cfg.p * D.at(diff);
      if (pd >= 1.0) throw std::invalid_argument("ising: p D(x) must stay below 1");
      const double v = cfg.beta == 0.0 ? 0.0 : std::atanh(pd);
      bJ[a * n + b] = bJ[b * n + a] = v;
    }

  // Gray-code sweep with incremental energy and local fields
  std::vector<int> spin(n, 1);
  std::vector<double> h(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i] += bJ[i * n + j];
  double E = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) E -= bJ[i * n + j];

  std::vector<double> corr(n, 0.0);
  double Z = 0.0;
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t g = 0;; ++g) {
    const double w = std::exp(-E);
    Z += w;
    const double so = spin[origin];
    for (int i = 0; i < n; ++i) corr[i] += w * so * spin[i];
    if (g + 1 == total) break;
    const int flip = std::countr_zero(g + 1);
    E += 2.0 * spin[flip] * h[flip];
    spin[flip] = -spin[flip];
    for (int j = 0; j < n; ++j) h[j] += 2.0 * spin[flip] * bJ[j * n + flip];
  }

  IsingResult out;
  out.corr.resize(n);
  for (int i = 0; i < n; ++i) out.corr[i] = corr[i] / Z;
  out.partition_log = std::log(Z);
  return out;
}

double susceptibility(const LatticeField& G) { return G.sum(); }
double susceptibility(const SymField& G) { return G.sum(); }

BubbleTriangle bubble_triangle(const SymField& G) {
  BubbleTriangle out;
  for_each_octant(G.box, [&](std::size_t i, std::span<const int>, double mult) {
    out.bubble += mult * G.values[i] * G.values[i];
  });
  SymField Gh = G;
  sym_dft_forward(Gh);
  double cube = 0.0;
  for_each_octant(G.box, [&](std::size_t i, std::span<const int>, double mult) {
    cube += mult * Gh.values[i] * Gh.values[i] * Gh.values[i];
  });
  out.triangle = cube / std::pow(static_cast<double>(G.box.side()), G.box.d);
  return out;
}

} // namespace lrlc
