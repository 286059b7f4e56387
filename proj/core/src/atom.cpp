#include "heisenkit/atom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace heisenkit {

namespace {

// Cholesky solve of the SPD Gram system, plus its spectral condition number
// (Jacobi sweeps; the matrices here are tiny).
struct SpdSolve {
  std::vector<double> solution;
  double condition = 1.0;
};

SpdSolve spd_solve(std::vector<double> A, std::vector<double> rhs) {
  const std::size_t m = rhs.size();
  std::vector<double> L(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = A[i * m + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * m + k] * L[j * m + k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("atom Gram matrix not positive definite");
        L[i * m + i] = std::sqrt(s);
      } else {
        L[i * m + j] = s / L[j * m + j];
      }
    }
  }
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i * m + k] * y[k];
    y[i] = s / L[i * m + i];
  }
  std::vector<double> x(m);
  for (std::size_t ii = m; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < m; ++k) s -= L[k * m + ii] * x[k];
    x[ii] = s / L[ii * m + ii];
  }
  // Jacobi eigenvalue sweeps for the condition number
  std::vector<double> B = A;
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) off += B[p * m + q] * B[p * m + q];
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = B[p * m + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = 0.5 * std::atan2(2.0 * apq, B[q * m + q] - B[p * m + p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < m; ++k) {
          const double bpk = B[p * m + k], bqk = B[q * m + k];
          B[p * m + k] = c * bpk - s * bqk;
          B[q * m + k] = s * bpk + c * bqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double bkp = B[k * m + p], bkq = B[k * m + q];
          B[k * m + p] = c * bkp - s * bkq;
          B[k * m + q] = s * bkp + c * bkq;
        }
      }
  }
  double lo = B[0], hi = B[0];
  for (std::size_t i = 1; i < m; ++i) {
    lo = std::min(lo, B[i * m + i]);
    hi = std::max(hi, B[i * m + i]);
  }
  SpdSolve out;
  out.solution = std::move(x);
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return out;
}

MeshSpec build_mesh_spec() { return MeshSpec{3, 10, 12, 0}; }
MeshSpec verify_mesh_spec() { return MeshSpec{4, 12, 14, 0}; }

WeightedMesh support_mesh(int n, double delta, const MeshSpec& ms) {
  FiberRegion reg;
  reg.r1 = 0.0;
  reg.r2 = delta;
  return build_region_mesh(n, reg, ms);
}

}  // namespace

int np_of(double p, int Q) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("np_of: requires 0 < p <= 1");
  return static_cast<int>(std::floor(Q * (1.0 / p - 1.0))) + 1;
}

double bump_profile(double q) {
  if (q >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - q));
}

double Atom::eval_centered(const HPoint& u) const {
  const double delta = params.ball.radius;
  const double q = gauge4(u) / (delta * delta * delta * delta);
  if (q >= 1.0) return 0.0;
  double poly = 0.0;
  for (std::size_t a = 0; a < poly_basis.basis.size(); ++a) {
    if (poly_coeffs[a] == 0.0) continue;
    poly += poly_coeffs[a] * monomial(poly_basis.basis[a], u);
  }
  return normalization * bump_profile(q) * poly;
}

double Atom::eval(const HPoint& z) const { return eval_centered(mul(inv(params.ball.center), z)); }

double eval_atom(const Atom& a, const HPoint& z) { return a.eval(z); }

Atom build_atom(const GroupContext& ctx, const AtomParams& params, const MultiIndex& target,
                const QuadSpec& spec) {
  (void)spec;
  const int n = ctx.n;
  const int Q = ctx.homogeneous_dim();
  if (!(params.p > 0.0 && params.p <= 1.0)) throw std::invalid_argument("build_atom: p out of (0,1]");
  if (!(params.p0 > 1.0)) throw std::invalid_argument("build_atom: p0 must exceed 1");
  if (params.N < np_of(params.p, Q))
    throw std::invalid_argument("build_atom: N below N_p");
  if (target.degree() != params.N + 1)
    throw std::invalid_argument("build_atom: target moment must have degree N+1");
  const double delta = params.ball.radius;

  Atom atom;
  atom.ctx = ctx;
  atom.params = params;
  atom.target = target;
  atom.poly_basis = monomial_basis(params.N + 1, n);
  atom.poly_coeffs.assign(atom.poly_basis.basis.size(), 0.0);

  // solved subset: all indices of degree <= N plus the target monomial
  std::vector<std::size_t> subset;
  std::size_t target_pos = atom.poly_basis.basis.size();
  for (std::size_t a = 0; a < atom.poly_basis.basis.size(); ++a) {
    if (atom.poly_basis.basis[a].degree() <= params.N) subset.push_back(a);
    if (atom.poly_basis.basis[a] == target) target_pos = a;
  }
  if (target_pos == atom.poly_basis.basis.size())
    throw std::invalid_argument("build_atom: target not in the monomial basis");
  subset.push_back(target_pos);
  const std::size_t m = subset.size();

  const WeightedMesh mesh = support_mesh(n, delta, build_mesh_spec());
  std::vector<double> psi(mesh.nodes.size());
  const double d4 = delta * delta * delta * delta;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    psi[i] = bump_profile(gauge4(mesh.nodes[i]) / d4);

  std::vector<std::vector<double>> monos(m, std::vector<double>(mesh.nodes.size()));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
      monos[a][i] = monomial(atom.poly_basis.basis[subset[a]], mesh.nodes[i]);

  std::vector<double> G(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        s += mesh.weights[i] * psi[i] * monos[a][i] * monos[b][i];
      G[a * m + b] = s;
      G[b * m + a] = s;
    }
  std::vector<double> rhs(m, 0.0);
  rhs[m - 1] = 1.0;  // the target moment, appended last
  SpdSolve sol = spd_solve(G, rhs);
  atom.gram_condition = sol.condition;
  for (std::size_t a = 0; a < m; ++a) atom.poly_coeffs[subset[a]] += sol.solution[a];

  // size condition with equality
  double lp0 = 0.0;
  std::vector<double> raw(mesh.nodes.size());
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    double poly = 0.0;
    for (std::size_t a = 0; a < m; ++a) poly += sol.solution[a] * monos[a][i];
    raw[i] = psi[i] * poly;
    lp0 += mesh.weights[i] * std::pow(std::abs(raw[i]), params.p0);
  }
  lp0 = std::pow(lp0, 1.0 / params.p0);
  const double volume = ball_volume(ctx, params.ball);
  const double size_target = std::pow(volume, 1.0 / params.p0 - 1.0 / params.p);
  atom.normalization = size_target / lp0;
  atom.lp0_norm = size_target;

  // certificate on a finer mesh
  const WeightedMesh fine = support_mesh(n, delta, verify_mesh_spec());
  double l1 = 0.0, sup = 0.0;
  const auto low = monomial_basis(params.N, n);
  std::vector<double> moments(low.basis.size(), 0.0);
  for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
    const double v = atom.eval_centered(fine.nodes[i]);
    l1 += fine.weights[i] * std::abs(v);
    sup = std::max(sup, std::abs(v));
    for (std::size_t a = 0; a < low.basis.size(); ++a)
      moments[a] += fine.weights[i] * v * monomial(low.basis[a], fine.nodes[i]);
  }
  atom.l1_norm = l1;
  atom.sup_norm = sup;
  double cert = 0.0;
  for (std::size_t a = 0; a < low.basis.size(); ++a) {
    const double scale = std::pow(delta, low.basis[a].degree()) * l1;
    cert = std::max(cert, std::abs(moments[a]) / scale);
  }
  atom.moment_certificate = cert;
  return atom;
}

Atom translate_atom(const Atom& a, const HPoint& z0, const QuadSpec& spec) {
  (void)spec;
  Atom out = a;
  out.params.ball.center = mul(z0, a.params.ball.center);
  const double delta = out.params.ball.radius;
  const WeightedMesh fine = support_mesh(a.n(), delta, verify_mesh_spec());
  const auto low = monomial_basis(a.params.N, a.n());
  std::vector<double> moments(low.basis.size(), 0.0);
  for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
    const double v = out.eval_centered(fine.nodes[i]);
    const HPoint w = mul(out.params.ball.center, fine.nodes[i]);
    for (std::size_t s = 0; s < low.basis.size(); ++s)
      moments[s] += fine.weights[i] * v * monomial(low.basis[s], w);
  }
  double cert = 0.0;
  for (std::size_t s = 0; s < low.basis.size(); ++s) {
    const double scale = std::pow(delta, low.basis[s].degree()) * out.l1_norm;
    cert = std::max(cert, std::abs(moments[s]) / scale);
  }
  out.moment_certificate = cert;
  return out;
}

std::vector<double> atom_moments(const Atom& a, int k, const QuadSpec& spec) {
  const int order = std::max(6, spec.points_per_axis + 2);
  MeshSpec ms{3, order, order + 2, 0};
  const WeightedMesh mesh = support_mesh(a.n(), a.params.ball.radius, ms);
  const auto basis = monomial_basis(k, a.n());
  std::vector<double> out(basis.basis.size(), 0.0);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const double v = a.eval_centered(mesh.nodes[i]);
    if (v == 0.0) continue;
    const HPoint w = mul(a.params.ball.center, mesh.nodes[i]);
    for (std::size_t s = 0; s < basis.basis.size(); ++s)
      out[s] += mesh.weights[i] * v * monomial(basis.basis[s], w);
  }
  return out;
}

AtomQuadrature atom_quadrature(const Atom& a, const MeshSpec& ms) {
  AtomQuadrature out;
  out.mesh = support_mesh(a.n(), a.params.ball.radius, ms);
  out.values.resize(out.mesh.nodes.size());
  for (std::size_t i = 0; i < out.mesh.nodes.size(); ++i)
    out.values[i] = a.eval_centered(out.mesh.nodes[i]);
  return out;
}

std::string atom_to_json(const Atom& a) {
  nlohmann::ordered_json j;
  j["n"] = a.n();
  j["p"] = a.params.p;
  j["p0"] = a.params.p0;
  j["N"] = a.params.N;
  j["center_x"] = a.params.ball.center.x;
  j["center_t"] = a.params.ball.center.t;
  j["radius"] = a.params.ball.radius;
  j["target"] = a.target.e;
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.poly_basis.basis.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["index"] = a.poly_basis.basis[i].e;
    entry["coeff"] = a.poly_coeffs[i];
    coeffs.push_back(entry);
  }
  j["poly"] = coeffs;
  j["normalization"] = a.normalization;
  j["moment_certificate"] = a.moment_certificate;
  j["gram_condition"] = a.gram_condition;
  j["l1_norm"] = a.l1_norm;
  j["lp0_norm"] = a.lp0_norm;
  j["sup_norm"] = a.sup_norm;
  return j.dump(2);
}

}  // namespace heisenkit
