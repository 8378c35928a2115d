#include "lrlc/field.hpp"

#include <cmath>
#include <stdexcept>

namespace lrlc {

double LatticeField::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double LatticeField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double LatticeField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  return m;
}

double SymField::at(std::span<const int> x) const {
  std::vector<int> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::abs(x[i]);
  return values[octant_index(box, a)];
}

double SymField::sum() const {
  double s = 0.0;
  for_each_octant(box, [&](std::size_t i, std::span<const int>, double mult) {
    s += mult * values[i];
  });
  return s;
}

double SymField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SymField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  return m;
}

double SymField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values) m = std::min(m, v);
  return m;
}

LatticeField SymField::to_full() const {
  LatticeField f(box);
  const std::size_t v = box.volume();
  std::vector<int> c(box.d), a(box.d);
  for (std::size_t i = 0; i < v; ++i) {
    site_coords(box, i, c);
    for (int j = 0; j < box.d; ++j) a[j] = std::abs(c[j]);
    f.values[i] = values[octant_index(box, a)];
  }
  return f;
}

SymField fold_to_octant(const LatticeField& f, double* max_defect) {
  SymField g(f.box);
  std::vector<double> counts(g.values.size(), 0.0);
  const std::size_t v = f.box.volume();
  std::vector<int> c(f.box.d), a(f.box.d);
  for (std::size_t i = 0; i < v; ++i) {
    site_coords(f.box, i, c);
    for (int j = 0; j < f.box.d; ++j) a[j] = std::abs(c[j]);
    const std::size_t oi = octant_index(f.box, a);
    g.values[oi] += f.values[i];
    counts[oi] += 1.0;
  }
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] /= counts[i];
  if (max_defect) {
    double md = 0.0;
    for (std::size_t i = 0; i < v; ++i) {
      site_coords(f.box, i, c);
      for (int j = 0; j < f.box.d; ++j) a[j] = std::abs(c[j]);
      md = std::max(md, std::abs(f.values[i] - g.values[octant_index(f.box, a)]));
    }
    *max_defect = md;
  }
  return g;
}

} // namespace lrlc
