#pragma once

#include <string>
#include <vector>

#include "heisenkit/group.hpp"
#include "heisenkit/multi_index.hpp"
#include "heisenkit/rational.hpp"

namespace heisenkit {

/// One exact term c * x^alpha * t^k * rho^{-beta} with rational c and beta.
struct KernelTerm {
  Rational coeff;
  std::vector<int> alpha;  // x exponents, length 2n
  int tpow = 0;
  Rational beta = 0;  // >= 0

  /// d(alpha) + 2k - beta, weighting x exponents by 1 and t by 2.
  Rational homogeneous_degree() const;
};

enum class Side { left, right };

/// Exact expressions in span{ c x^alpha t^k rho^{-beta} }, the class closed
/// under d/dx_i, d/dt, the invariant fields X_i, X~_i and the sub-Laplacian.
/// Terms are kept canonically sorted with like terms merged and zero
/// coefficients pruned; instances are immutable afterwards.
class KernelExpr {
 public:
  explicit KernelExpr(int n) : n_(n) {}

  static KernelExpr zero(int n) { return KernelExpr(n); }
  static KernelExpr constant(int n, const Rational& c);
  static KernelExpr monomial(int n, const MultiIndex& I, const Rational& c = Rational(1));
  /// rho^{-beta}; beta may be any nonnegative rational.
  static KernelExpr gauge_power(int n, const Rational& beta);
  static KernelExpr from_terms(int n, std::vector<KernelTerm> terms);

  int n() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<KernelTerm>& terms() const { return terms_; }

  KernelExpr operator+(const KernelExpr& o) const;
  KernelExpr operator-(const KernelExpr& o) const;
  KernelExpr scaled(const Rational& c) const;

  /// True when every term has the same homogeneous degree (vacuously true
  /// for the zero expression); the degree is reported through *degree.
  bool is_homogeneous(Rational* degree = nullptr) const;

  /// Pullback under the dilation z -> r.z: each term picks up r^{degree}.
  /// Requires every term degree to be an integer (so the result stays rational).
  KernelExpr dilated(const Rational& r) const;

  /// Numeric evaluation; throws std::domain_error at the group identity
  /// when a term carries beta > 0.
  double eval(const HPoint& z) const;

  /// Debug form, one "c * x^alpha t^k rho^-beta" per line.
  std::string to_string() const;

 private:
  int n_ = 1;
  std::vector<KernelTerm> terms_;
  std::vector<double> coeff_d_;  // eval caches, aligned with terms_
  std::vector<double> beta_d_;

  void set_terms(std::vector<KernelTerm> raw);
};

/// Left-invariant field X_i, 0-based i in [0, 2n]:
///   X_i     = d/dx_i     + 2 x_{i+n} d/dt   (i < n)
///   X_{i+n} = d/dx_{i+n} - 2 x_i     d/dt   (i < n)
///   X_{2n}  = d/dt
KernelExpr apply_left(int i, const KernelExpr& e);

/// Right-invariant field X~_i (the d/dt coefficients flip sign).
KernelExpr apply_right(int i, const KernelExpr& e);

/// X^I = X_1^{i_1} X_2^{i_2} ... applied in that fixed order (the last
/// factor acts first).
KernelExpr apply_multi(const MultiIndex& I, const KernelExpr& e, Side side);

/// L = - sum_{i=1}^{2n} X_i^2.
KernelExpr sublaplacian(const KernelExpr& e);

/// [X_i, X_j] e.
KernelExpr commutator(int i, int j, const KernelExpr& e);

/// [X_i, X_j] applied to a generic seed polynomial (all monomials of
/// homogeneous degree <= 3); validates the field normalization.
KernelExpr commutator_check(int i, int j, int n);

}  // namespace heisenkit
