#include "heisenkit/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace heisenkit {

int MultiIndex::order() const {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

int MultiIndex::degree() const {
  if (e.empty()) return 0;
  int s = 0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) s += e[i];
  return s + 2 * e.back();
}

MultiIndex zero_index(int n) { return MultiIndex(std::vector<int>(2 * n + 1, 0)); }

MultiIndex unit_index(int n, int slot) {
  MultiIndex I = zero_index(n);
  I.e.at(slot) = 1;
  return I;
}

double monomial(const MultiIndex& I, const HPoint& z) {
  if (I.e.size() != z.x_dim() + 1) throw std::invalid_argument("monomial: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < z.x_dim(); ++i)
    for (int k = 0; k < I.e[i]; ++k) v *= z.x[i];
  for (int k = 0; k < I.e.back(); ++k) v *= z.t;
  return v;
}

PolySpace monomial_basis(int k, int n) {
  if (k < 0) throw std::invalid_argument("monomial_basis: k must be nonnegative");
  const int dim = 2 * n + 1;
  std::vector<MultiIndex> all;
  std::vector<int> cur(dim, 0);
  // enumerate exponents with d(I) <= k
  std::function<void(int, int)> rec = [&](int slot, int deg_left) {
    if (slot == dim) {
      all.emplace_back(cur);
      return;
    }
    const int w = (slot == dim - 1) ? 2 : 1;
    for (int e = 0; e * w <= deg_left; ++e) {
      cur[slot] = e;
      rec(slot + 1, deg_left - e * w);
    }
    cur[slot] = 0;
  };
  rec(0, k);
  std::sort(all.begin(), all.end(), [](const MultiIndex& a, const MultiIndex& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.e > b.e;  // largest leading exponent first within a grade
  });
  PolySpace ps;
  ps.k = k;
  ps.n = n;
  ps.basis = std::move(all);
  return ps;
}

}  // namespace heisenkit
