#pragma once

#include <vector>

#include "heisenkit/group.hpp"

namespace heisenkit {

/// Multi-index I = (i_1,...,i_{2n}, i_{2n+1}); the last slot is the
/// t-exponent and counts twice in the homogeneous degree d(I).
struct MultiIndex {
  std::vector<int> e;  // length 2n+1

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e_) : e(std::move(e_)) {}

  int order() const;   // |I|
  int degree() const;  // d(I) = i_1 + ... + i_{2n} + 2 i_{2n+1}
  int n() const { return (static_cast<int>(e.size()) - 1) / 2; }

  bool operator==(const MultiIndex& o) const { return e == o.e; }
};

MultiIndex zero_index(int n);
MultiIndex unit_index(int n, int slot);

/// z^I = x_1^{i_1} ... x_{2n}^{i_{2n}} t^{i_{2n+1}}.
double monomial(const MultiIndex& I, const HPoint& z);

/// Polynomials of homogeneous degree at most k, spanned by the listed monomials.
struct PolySpace {
  int k = 0;
  int n = 1;
  std::vector<MultiIndex> basis;

  std::size_t dim() const { return basis.size(); }
};

/// All multi-indices with d(I) <= k, graded by d(I) and ordered
/// lexicographically (largest leading exponent first) within a grade,
/// so that for n=1, k=1 the basis reads {1, x1, x2}.
PolySpace monomial_basis(int k, int n);

}  // namespace heisenkit
