#pragma once

#include <string>
#include <vector>

#include "heisenkit/group.hpp"
#include "heisenkit/multi_index.hpp"
#include "heisenkit/quadrature.hpp"

namespace heisenkit {

/// Smallest admissible moment order, floor(Q(1/p - 1)) + 1 for 0 < p <= 1.
int np_of(double p, int Q);

struct AtomParams {
  double p = 0.9;
  double p0 = 2.0;
  int N = 1;
  KoranyiBall ball{identity(1), 1.0};
};

/// A (p, p0, N)-atom: a = s * psi * poly on the ball, where psi is the
/// smooth profile exp(-1/(1 - (rho(u)/delta)^4)) in the e-centred frame
/// and poly kills every moment of homogeneous degree <= N.  The size
/// condition ||a||_{p0} = |B|^{1/p0 - 1/p} holds with equality by the
/// choice of s.
struct Atom {
  GroupContext ctx;
  AtomParams params;
  MultiIndex target;               // degree N+1 monomial whose moment is kept
  PolySpace poly_basis;            // monomial_basis(N+1, n)
  std::vector<double> poly_coeffs; // over poly_basis; zero outside the solved set
  double normalization = 1.0;      // s
  double moment_certificate = 0.0; // max |moment| / (delta^{d(I)} ||a||_1), d(I) <= N
  double gram_condition = 1.0;
  double l1_norm = 0.0;
  double lp0_norm = 0.0;
  double sup_norm = 0.0;

  int n() const { return ctx.n; }
  double radius() const { return params.ball.radius; }
  const HPoint& center() const { return params.ball.center; }

  /// Value in the e-centred frame (u = z0^{-1} z).
  double eval_centered(const HPoint& u) const;
  double eval(const HPoint& z) const;
};

/// Smooth profile exp(-1/(1-q)) for q < 1, with q = rho(u)^4 / delta^4.
double bump_profile(double gauge4_over_delta4);

/// Builds the atom whose d(I) <= N moments vanish and whose `target`
/// moment (d = N+1) equals 1 before the size normalization.  The Gram
/// system is solved by Cholesky; its condition number is recorded.
Atom build_atom(const GroupContext& ctx, const AtomParams& params, const MultiIndex& target,
                const QuadSpec& spec);

/// The atom recentred at z0 . (old center); coefficients are reused and the
/// moment certificate is recomputed in the new frame.
Atom translate_atom(const Atom& a, const HPoint& z0, const QuadSpec& spec);

/// Moments int a(w) w^I dw for all d(I) <= k, ordered like monomial_basis(k, n).
std::vector<double> atom_moments(const Atom& a, int k, const QuadSpec& spec);

double eval_atom(const Atom& a, const HPoint& z);

/// Mesh of the support ball in the e-centred frame with cached atom values.
struct AtomQuadrature {
  WeightedMesh mesh;
  std::vector<double> values;
};
AtomQuadrature atom_quadrature(const Atom& a, const MeshSpec& ms);

std::string atom_to_json(const Atom& a);

}  // namespace heisenkit
