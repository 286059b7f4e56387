#include "heisenkit/kernel_expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace heisenkit {

Rational KernelTerm::homogeneous_degree() const {
  int d = 0;
  for (int a : alpha) d += a;
  return Rational(d + 2 * tpow) - beta;
}

namespace {

using MonoKey = std::pair<std::vector<int>, int>;  // (alpha, tpow)
using Poly = std::map<MonoKey, Rational>;

// Monomials of G = (sum_i x_i^2)^2 + t^2, the defining relation rho^4 = G.
std::vector<std::pair<MonoKey, Rational>> relation_monomials(int n) {
  std::vector<std::pair<MonoKey, Rational>> out;
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i; j < 2 * n; ++j) {
      std::vector<int> a(2 * n, 0);
      a[i] += 2;
      a[j] += 2;
      out.push_back({{std::move(a), 0}, Rational(i == j ? 1 : 2)});
    }
  out.push_back({{std::vector<int>(2 * n, 0), 2}, Rational(1)});
  return out;
}

// Reduce P modulo G under lex order (x_1 leading): afterwards every monomial
// has x_1-exponent <= 3.  The quotient accumulates into `quotient`.
void reduce_mod_relation(Poly& P, Poly& quotient, int n) {
  const auto G = relation_monomials(n);
  for (;;) {
    auto it = std::find_if(P.begin(), P.end(), [](const auto& kv) {
      return kv.second != 0 && kv.first.first[0] >= 4;
    });
    if (it == P.end()) break;
    const Rational c = it->second;
    MonoKey q = it->first;
    q.first[0] -= 4;
    quotient[q] += c;
    for (const auto& [gm, gc] : G) {
      MonoKey m = q;
      for (int i = 0; i < 2 * n; ++i) m.first[i] += gm.first[i];
      m.second += gm.second;
      P[m] -= c * gc;
    }
  }
}

}  // namespace

void KernelExpr::set_terms(std::vector<KernelTerm> raw) {
  // group by beta, merge like monomials
  std::map<Rational, Poly> groups;
  for (auto& T : raw) {
    if (static_cast<int>(T.alpha.size()) != 2 * n_)
      throw std::invalid_argument("KernelExpr: term with wrong x-exponent length");
    if (T.tpow < 0 || T.beta < 0)
      throw std::invalid_argument("KernelExpr: negative t power or beta");
    groups[T.beta][{T.alpha, T.tpow}] += T.coeff;
  }
  // canonical form: the polynomial in front of rho^{-beta} is reduced modulo
  // rho^4 = (sum x_i^2)^2 + t^2 whenever the quotient stays in the class
  // (beta - 4 >= 0); quotients cascade downward.
  for (;;) {
    auto it = std::find_if(groups.rbegin(), groups.rend(), [](const auto& kv) {
      if (kv.first < 4) return false;
      for (const auto& [m, c] : kv.second)
        if (c != 0 && m.first[0] >= 4) return true;
      return false;
    });
    if (it == groups.rend()) break;
    Poly quotient;
    reduce_mod_relation(it->second, quotient, n_);
    Poly& lower = groups[it->first - 4];
    for (const auto& [m, c] : quotient) lower[m] += c;
  }
  terms_.clear();
  coeff_d_.clear();
  beta_d_.clear();
  for (auto& [beta, poly] : groups) {
    for (auto& [mono, c] : poly) {
      if (c == 0) continue;
      KernelTerm T;
      T.alpha = mono.first;
      T.tpow = mono.second;
      T.beta = beta;
      T.coeff = c;
      terms_.push_back(std::move(T));
    }
  }
  coeff_d_.reserve(terms_.size());
  beta_d_.reserve(terms_.size());
  for (const auto& T : terms_) {
    coeff_d_.push_back(to_double(T.coeff));
    beta_d_.push_back(to_double(T.beta));
  }
}

KernelExpr KernelExpr::constant(int n, const Rational& c) {
  KernelTerm T;
  T.coeff = c;
  T.alpha.assign(2 * n, 0);
  return from_terms(n, {T});
}

KernelExpr KernelExpr::monomial(int n, const MultiIndex& I, const Rational& c) {
  if (static_cast<int>(I.e.size()) != 2 * n + 1)
    throw std::invalid_argument("KernelExpr::monomial: index length mismatch");
  KernelTerm T;
  T.coeff = c;
  T.alpha.assign(I.e.begin(), I.e.end() - 1);
  T.tpow = I.e.back();
  return from_terms(n, {T});
}

KernelExpr KernelExpr::gauge_power(int n, const Rational& beta) {
  if (beta < 0) throw std::invalid_argument("gauge_power: beta must be >= 0");
  KernelTerm T;
  T.coeff = 1;
  T.alpha.assign(2 * n, 0);
  T.beta = beta;
  return from_terms(n, {T});
}

KernelExpr KernelExpr::from_terms(int n, std::vector<KernelTerm> terms) {
  KernelExpr e(n);
  e.set_terms(std::move(terms));
  return e;
}

KernelExpr KernelExpr::operator+(const KernelExpr& o) const {
  if (n_ != o.n_) throw std::invalid_argument("KernelExpr: mixed dimensions");
  std::vector<KernelTerm> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(n_, std::move(all));
}

KernelExpr KernelExpr::operator-(const KernelExpr& o) const { return *this + o.scaled(Rational(-1)); }

KernelExpr KernelExpr::scaled(const Rational& c) const {
  std::vector<KernelTerm> all = terms_;
  for (auto& T : all) T.coeff *= c;
  return from_terms(n_, std::move(all));
}

bool KernelExpr::is_homogeneous(Rational* degree) const {
  if (terms_.empty()) {
    if (degree) *degree = 0;
    return true;
  }
  Rational d0 = terms_.front().homogeneous_degree();
  for (const auto& T : terms_)
    if (T.homogeneous_degree() != d0) return false;
  if (degree) *degree = d0;
  return true;
}

KernelExpr KernelExpr::dilated(const Rational& r) const {
  if (r <= 0) throw std::invalid_argument("dilated: r must be positive");
  std::vector<KernelTerm> out = terms_;
  for (auto& T : out) {
    Rational d = T.homogeneous_degree();
    if (boost::multiprecision::denominator(d) != 1)
      throw std::domain_error("dilated: non-integer term degree");
    const long e = boost::multiprecision::numerator(d).convert_to<long>();
    T.coeff *= rational_pow(r, e);
  }
  return from_terms(n_, std::move(out));
}

double KernelExpr::eval(const HPoint& z) const {
  if (static_cast<int>(z.x_dim()) != 2 * n_) throw std::invalid_argument("eval: dimension mismatch");
  const double r4 = gauge4(z);
  double rho = 0.0;
  bool rho_ready = false;
  double sum = 0.0;
  double last_beta = 0.0;
  double last_pow = 1.0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const KernelTerm& T = terms_[k];
    double v = coeff_d_[k];
    for (std::size_t i = 0; i < T.alpha.size(); ++i)
      for (int a = 0; a < T.alpha[i]; ++a) v *= z.x[i];
    for (int a = 0; a < T.tpow; ++a) v *= z.t;
    const double b = beta_d_[k];
    if (b != 0.0) {
      if (r4 == 0.0) throw std::domain_error("KernelExpr::eval: singular at the identity");
      if (!rho_ready) {
        rho = std::pow(r4, 0.25);
        rho_ready = true;
      }
      if (b != last_beta) {
        last_pow = std::pow(rho, -b);
        last_beta = b;
      }
      v *= last_pow;
    }
    sum += v;
  }
  return sum;
}

std::string KernelExpr::to_string() const {
  if (terms_.empty()) return "0\n";
  std::ostringstream os;
  for (const auto& T : terms_) {
    os << T.coeff << " * x^(";
    for (std::size_t i = 0; i < T.alpha.size(); ++i) {
      if (i) os << ",";
      os << T.alpha[i];
    }
    os << ") t^" << T.tpow << " rho^-" << T.beta << "\n";
  }
  return os.str();
}

namespace {

// d/dx_i of one term:  alpha_i x^{alpha-e_i} ... - beta x^{alpha+e_i} |x|^2 rho^{-beta-4},
// with |x|^2 expanded into monomials.
void emit_dx(int i, const KernelTerm& T, int n, std::vector<KernelTerm>& out) {
  if (T.alpha[i] > 0) {
    KernelTerm S = T;
    S.coeff *= T.alpha[i];
    S.alpha[i] -= 1;
    out.push_back(std::move(S));
  }
  if (T.beta != 0) {
    for (int j = 0; j < 2 * n; ++j) {
      KernelTerm S = T;
      S.coeff *= -T.beta;
      S.alpha[i] += 1;
      S.alpha[j] += 2;
      S.beta += 4;
      out.push_back(std::move(S));
    }
  }
}

// d/dt of one term:  k x^alpha t^{k-1} ... - (beta/2) x^alpha t^{k+1} rho^{-beta-4}.
void emit_dt(const KernelTerm& T, std::vector<KernelTerm>& out) {
  if (T.tpow > 0) {
    KernelTerm S = T;
    S.coeff *= T.tpow;
    S.tpow -= 1;
    out.push_back(std::move(S));
  }
  if (T.beta != 0) {
    KernelTerm S = T;
    S.coeff *= -T.beta / 2;
    S.tpow += 1;
    S.beta += 4;
    out.push_back(std::move(S));
  }
}

KernelExpr apply_field(int i, const KernelExpr& e, bool right) {
  const int n = e.n();
  if (i < 0 || i > 2 * n) throw std::invalid_argument("vector field index out of range");
  std::vector<KernelTerm> out;
  out.reserve(e.term_count() * (2 * n + 2));
  const Rational sgn = right ? Rational(-1) : Rational(1);
  for (const auto& T : e.terms()) {
    if (i == 2 * n) {
      emit_dt(T, out);
      continue;
    }
    emit_dx(i, T, n, out);
    // the 2 x_{i+-n} d/dt part; sign flips between X_i and X~_i
    std::vector<KernelTerm> dt;
    emit_dt(T, dt);
    const int partner = i < n ? i + n : i - n;
    const Rational c = (i < n ? Rational(2) : Rational(-2)) * sgn;
    for (auto& S : dt) {
      S.coeff *= c;
      S.alpha[partner] += 1;
      out.push_back(std::move(S));
    }
  }
  return KernelExpr::from_terms(n, std::move(out));
}

}  // namespace

KernelExpr apply_left(int i, const KernelExpr& e) { return apply_field(i, e, false); }

KernelExpr apply_right(int i, const KernelExpr& e) { return apply_field(i, e, true); }

KernelExpr apply_multi(const MultiIndex& I, const KernelExpr& e, Side side) {
  const int n = e.n();
  if (static_cast<int>(I.e.size()) != 2 * n + 1)
    throw std::invalid_argument("apply_multi: index length mismatch");
  KernelExpr out = e;
  // X^I = X_1^{i_1} ... X_{2n+1}^{i_{2n+1}}: rightmost factor acts first.
  for (int slot = 2 * n; slot >= 0; --slot)
    for (int k = 0; k < I.e[slot]; ++k)
      out = (side == Side::left) ? apply_left(slot, out) : apply_right(slot, out);
  return out;
}

KernelExpr sublaplacian(const KernelExpr& e) {
  const int n = e.n();
  KernelExpr acc = KernelExpr::zero(n);
  for (int i = 0; i < 2 * n; ++i) acc = acc + apply_left(i, apply_left(i, e));
  return acc.scaled(Rational(-1));
}

KernelExpr commutator(int i, int j, const KernelExpr& e) {
  return apply_left(i, apply_left(j, e)) - apply_left(j, apply_left(i, e));
}

KernelExpr commutator_check(int i, int j, int n) {
  KernelExpr seed = KernelExpr::zero(n);
  for (const auto& I : monomial_basis(3, n).basis) seed = seed + KernelExpr::monomial(n, I);
  return commutator(i, j, seed);
}

}  // namespace heisenkit
