#include "heisenkit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "heisenkit/chebyshev.hpp"
#include "heisenkit/parallel.hpp"

namespace heisenkit {

QuadResult compute_cn(int n, const QuadSpec& spec) {
  if (n < 1) throw std::invalid_argument("compute_cn: n >= 1 required");
  QuadSpec s = spec;
  s.tail_exponent = 2.0 * n + 6.0;  // |x|^2 (rho^4+1)^{-(n+4)/2} <= rho^{-2n-6}
  if (s.tail_constant < 0.0) s.tail_constant = 1.0;
  const double factor = static_cast<double>(n) * (n + 2);
  auto f = [n](const HPoint& z) {
    double x2 = 0.0;
    for (double v : z.x) x2 += v * v;
    return x2 * std::pow(gauge4(z) + 1.0, -0.5 * (n + 4));
  };
  QuadResult I = integrate_fullspace(f, n, s);
  QuadResult out;
  out.value = 1.0 / (factor * I.value);
  out.error_estimate = I.error_estimate / (factor * I.value * I.value);
  out.evaluations = I.evaluations;
  return out;
}

FundamentalSolution make_fundamental_solution(int n, const QuadSpec& spec) {
  FundamentalSolution fs;
  fs.n = n;
  fs.kernel = KernelExpr::gauge_power(n, Rational(2 * n));
  if (!sublaplacian(fs.kernel).is_zero())
    throw std::logic_error("fundamental solution kernel failed the symbolic harmonicity check");
  const QuadResult cn = compute_cn(n, spec);
  fs.c_n = cn.value;
  fs.c_n_error = cn.error_estimate;
  return fs;
}

struct PotentialField::Surrogate {
  std::once_flag once;
  bool ready = false;
  std::vector<Cheb3> fields;  // slot-indexed, d(I) <= 1
};

PotentialField::PotentialField(GroupContext ctx, Atom atom, FundamentalSolution fs,
                               PotentialNumerics num)
    : ctx_(std::move(ctx)),
      atom_(std::move(atom)),
      fs_(std::move(fs)),
      num_(num),
      surrogate_(std::make_shared<Surrogate>()) {
  const int n = ctx_.n;
  const auto ids = monomial_basis(num_.max_derivative_degree, n);
  kernel_ids_ = ids.basis;
  kernels_.reserve(kernel_ids_.size());
  for (const auto& I : kernel_ids_) kernels_.push_back(apply_multi(I, fs_.kernel, Side::left));
  right_der_.resize(kernels_.size());
  for (std::size_t s = 0; s < kernels_.size(); ++s) {
    right_der_[s].reserve(2 * n);
    for (int j = 0; j < 2 * n; ++j) right_der_[s].push_back(apply_right(j, kernels_[s]));
  }
  atom_quad_ = atom_quadrature(atom_, num_.atom_mesh);
  sweep_quad_ = atom_quadrature(atom_, num_.sweep_mesh);
  auto invert_nodes = [](const WeightedMesh& m) {
    std::vector<HPoint> out;
    out.reserve(m.nodes.size());
    for (const auto& p : m.nodes) out.push_back(inv(p));
    return out;
  };
  atom_quad_inv_ = invert_nodes(atom_quad_.mesh);
  sweep_quad_inv_ = invert_nodes(sweep_quad_.mesh);
}

int PotentialField::slot_of(const MultiIndex& I) const {
  for (std::size_t s = 0; s < kernel_ids_.size(); ++s)
    if (kernel_ids_[s] == I) return static_cast<int>(s);
  return -1;
}

namespace {

// Gauge shell ladder around the evaluation point (masked to the support).
struct ShellLadder {
  std::vector<double> edges;
};

ShellLadder make_ladder(double eps, double ratio, double r_start, double r_out) {
  ShellLadder L;
  double r = eps;
  std::vector<double> up;
  while (r < r_out) {
    if (r * ratio > r_start) up.push_back(r);
    r *= ratio;
  }
  up.push_back(r_out);
  // ensure the ladder starts no lower than needed
  L.edges = std::move(up);
  return L;
}

}  // namespace

double PotentialField::near_value_direct(int slot, const HPoint& zeta) const {
  const double delta = atom_.params.ball.radius;
  const double rho = gauge(zeta);
  const double eps = num_.inner_cutoff_factor * delta;
  const double r_start = rho > delta ? 0.98 * (rho - delta) : 0.0;
  const ShellLadder ladder =
      make_ladder(eps, num_.shell_ratio, std::max(eps, r_start), 1.001 * (rho + delta));
  const KernelExpr& K = kernels_[slot];
  FiberRegion reg;
  reg.has_mask = true;
  reg.mask_x = zeta.x;
  reg.mask_t = zeta.t;
  reg.mask_delta = delta;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < ladder.edges.size(); ++k) {
    reg.r1 = ladder.edges[k];
    reg.r2 = ladder.edges[k + 1];
    const WeightedMesh mesh = build_region_mesh(ctx_.n, reg, num_.shell_mesh);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      const double a = atom_.eval_centered(mul(zeta, mesh.nodes[i]));
      if (a == 0.0) continue;
      acc += mesh.weights[i] * a * K.eval(inv(mesh.nodes[i]));
    }
  }
  return fs_.c_n * acc;
}

double PotentialField::far_value(int slot, const HPoint& zeta, const AtomQuadrature& qa,
                                 bool subtract) const {
  const KernelExpr& K = kernels_[slot];
  const std::vector<HPoint>& invs = (&qa == &atom_quad_) ? atom_quad_inv_ : sweep_quad_inv_;
  const int xd = 2 * ctx_.n;
  double acc = 0.0;
  if (!subtract) {
    for (std::size_t m = 0; m < qa.mesh.nodes.size(); ++m) {
      if (qa.values[m] == 0.0) continue;
      acc += qa.mesh.weights[m] * qa.values[m] * K.eval(mul(invs[m], zeta));
    }
    return fs_.c_n * acc;
  }
  // subtract the group Taylor polynomial of u -> K(u^{-1} zeta) at u = e;
  // the atom's vanishing moments make the subtraction exact up to the
  // moment certificate, and the integrand now carries the far-field decay.
  const double k0 = K.eval(zeta);
  std::vector<double> kg(xd);
  for (int j = 0; j < xd; ++j) kg[j] = right_der_[slot][j].eval(zeta);
  for (std::size_t m = 0; m < qa.mesh.nodes.size(); ++m) {
    if (qa.values[m] == 0.0) continue;
    double corr = K.eval(mul(invs[m], zeta)) - k0;
    const HPoint& u = qa.mesh.nodes[m];
    for (int j = 0; j < xd; ++j) corr += u.x[j] * kg[j];
    acc += qa.mesh.weights[m] * qa.values[m] * corr;
  }
  return fs_.c_n * acc;
}

double PotentialField::remainder_far(const HPoint& zeta, const HPoint& w,
                                     const AtomQuadrature& qa) const {
  // Taylor-remainder bracket, with its own group Taylor polynomial at u = e
  // subtracted; resolves R at far base points without cancellation.
  const std::vector<HPoint>& invs = (&qa == &atom_quad_) ? atom_quad_inv_ : sweep_quad_inv_;
  const int xd = 2 * ctx_.n;
  const HPoint zw = mul(zeta, w);
  const KernelExpr& K = kernels_[0];
  std::vector<int> lslot(xd);
  for (int l = 0; l < xd; ++l) lslot[l] = slot_of(unit_index(ctx_.n, l));

  auto bracket = [&](const HPoint& at_zw, const HPoint& at_z) {
    double g = K.eval(at_zw) - K.eval(at_z);
    for (int l = 0; l < xd; ++l) g -= w.x[l] * kernels_[lslot[l]].eval(at_z);
    return g;
  };
  const double g_e = bracket(zw, zeta);
  std::vector<double> Dj(xd);
  for (int j = 0; j < xd; ++j) {
    double d = right_der_[0][j].eval(zw) - right_der_[0][j].eval(zeta);
    for (int l = 0; l < xd; ++l) d -= w.x[l] * right_der_[lslot[l]][j].eval(zeta);
    Dj[j] = d;
  }
  double acc = 0.0;
  for (std::size_t m = 0; m < qa.mesh.nodes.size(); ++m) {
    if (qa.values[m] == 0.0) continue;
    const HPoint& u = qa.mesh.nodes[m];
    double v = bracket(mul(invs[m], zw), mul(invs[m], zeta)) - g_e;
    for (int j = 0; j < xd; ++j) v += u.x[j] * Dj[j];
    acc += qa.mesh.weights[m] * qa.values[m] * v;
  }
  return fs_.c_n * acc;
}

void PotentialField::ensure_surrogate() const {
  std::call_once(surrogate_->once, [this]() {
    if (ctx_.n != 1) return;  // sweeps fall back to direct shells for n >= 2
    const double delta = atom_.params.ball.radius;
    const double R = num_.surrogate_factor * delta;
    const std::array<double, 3> lo{-R, -R, -R * R};
    const std::array<double, 3> hi{R, R, R * R};
    const int ord = num_.surrogate_order;
    const std::array<int, 3> order{ord, ord, ord};
    surrogate_->fields.resize(1 + 2 * ctx_.n);
    // one pass per slot; the fit parallelizes over Chebyshev nodes internally
    for (int slot = 0; slot < 1 + 2 * ctx_.n; ++slot) {
      surrogate_->fields[slot] = Cheb3::fit(lo, hi, order, [this, slot](double a, double b, double c) {
        return near_value_direct(slot, HPoint({a, b}, c));
      });
    }
    surrogate_->ready = true;
  });
}

bool PotentialField::surrogate_ready() const { return surrogate_->ready; }

double PotentialField::field_in_frame(int slot, const HPoint& zeta, bool fast) const {
  const double delta = atom_.params.ball.radius;
  const double rho = gauge(zeta);
  const int deg = kernel_ids_[slot].degree();
  if (fast) {
    if (rho <= num_.surrogate_factor * delta && ctx_.n == 1 && deg <= 1) {
      ensure_surrogate();
      if (surrogate_->ready && surrogate_->fields[slot].covers(zeta.x[0], zeta.x[1], zeta.t))
        return surrogate_->fields[slot].eval(zeta.x[0], zeta.x[1], zeta.t);
    }
    if (rho < num_.near_factor * delta) {
      if (deg >= 2)
        throw std::domain_error("potential derivative of degree >= 2 needs rho >= 2 delta");
      return near_value_direct(slot, zeta);
    }
    return far_value(slot, zeta, sweep_quad_, rho >= num_.subtract_factor * delta);
  }
  if (rho < num_.near_factor * delta) {
    if (deg >= 2)
      throw std::domain_error("potential derivative of degree >= 2 needs rho >= 2 delta");
    return near_value_direct(slot, zeta);
  }
  return far_value(slot, zeta, atom_quad_, rho >= num_.subtract_factor * delta);
}

double PotentialField::eval(const HPoint& z) const {
  const HPoint zeta = mul(inv(atom_.params.ball.center), z);
  return field_in_frame(0, zeta, false);
}

double PotentialField::derivative(const MultiIndex& I, const HPoint& z) const {
  const int slot = slot_of(I);
  if (slot < 0) throw std::invalid_argument("potential derivative: index degree too high");
  const HPoint zeta = mul(inv(atom_.params.ball.center), z);
  return field_in_frame(slot, zeta, false);
}

double PotentialField::remainder(const HPoint& z, const HPoint& w) const {
  const HPoint zeta = mul(inv(atom_.params.ball.center), z);
  return remainder_in_frame(zeta, w, false);
}

double PotentialField::remainder_in_frame(const HPoint& zeta, const HPoint& w, bool fast) const {
  const double delta = atom_.params.ball.radius;
  const double rho = gauge(zeta);
  const HPoint zw = mul(zeta, w);
  if (rho >= num_.subtract_factor * delta && gauge(w) <= 0.25 * rho &&
      gauge(zw) >= num_.subtract_factor * delta) {
    return remainder_far(zeta, w, fast ? sweep_quad_ : atom_quad_);
  }
  double r = field_in_frame(0, zw, fast) - field_in_frame(0, zeta, fast);
  for (int l = 0; l < 2 * ctx_.n; ++l)
    r -= w.x[l] * field_in_frame(slot_of(unit_index(ctx_.n, l)), zeta, fast);
  return r;
}

double potential_eval(const PotentialField& pf, const HPoint& z, const QuadSpec& spec) {
  (void)spec;
  return pf.eval(z);
}

double potential_derivative(const PotentialField& pf, const MultiIndex& I, const HPoint& z,
                            const QuadSpec& spec) {
  (void)spec;
  return pf.derivative(I, z);
}

double remainder_eval(const PotentialField& pf, const HPoint& z, const HPoint& w,
                      const QuadSpec& spec) {
  (void)spec;
  return pf.remainder(z, w);
}

double weak_residual(const PotentialField& pf, const TestFunction& u, const QuadSpec& spec) {
  const int n = pf.ctx().n;
  const double L = 7.0;  // the test functions decay like exp(-|x|^2 - t^2)
  const int order = std::max(4, spec.points_per_axis);
  const int panels = 2;
  const GaussRule& rule = gauss_legendre(order);
  const HPoint center_inv = inv(pf.atom().params.ball.center);

  // int b . Lu over the box, tensor GL panels, b through the sweep paths
  const int xd = 2 * n;
  std::vector<double> edges;
  for (int i = 0; i <= panels; ++i) edges.push_back(-L + 2.0 * L * i / panels);

  struct Node {
    double c, w;
  };
  std::vector<Node> line;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double h = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (int k = 0; k < order; ++k) line.push_back({mid + h * rule.nodes[k], h * rule.weights[k]});
  }
  const std::size_t m = line.size();
  std::vector<double> partial(m, 0.0);
  parallel_for(m, [&](std::size_t i0) {
    HPoint z;
    z.x.assign(xd, 0.0);
    double acc = 0.0;
    // iterate the remaining axes
    const std::size_t total = [&] {
      std::size_t t = 1;
      for (int d = 1; d < xd + 1; ++d) t *= m;
      return t;
    }();
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      double w = line[i0].w;
      z.x[0] = line[i0].c;
      for (int d = 1; d < xd; ++d) {
        const std::size_t j = rest % m;
        rest /= m;
        z.x[d] = line[j].c;
        w *= line[j].w;
      }
      const std::size_t j = rest % m;
      z.t = line[j].c;
      w *= line[j].w;
      const double lu = u.lap(z);
      if (lu == 0.0) continue;
      const HPoint zeta = mul(center_inv, z);
      acc += w * pf.field_in_frame(0, zeta, true) * lu;
    }
    partial[i0] = acc;
  });
  double b_against_lu = 0.0;
  for (double v : partial) b_against_lu += v;

  // int a . u on the accurate support mesh
  const AtomQuadrature qa = atom_quadrature(pf.atom(), pf.numerics().atom_mesh);
  double a_against_u = 0.0;
  for (std::size_t i = 0; i < qa.mesh.nodes.size(); ++i) {
    if (qa.values[i] == 0.0) continue;
    a_against_u +=
        qa.mesh.weights[i] * qa.values[i] * u.value(mul(pf.atom().params.ball.center, qa.mesh.nodes[i]));
  }
  return b_against_lu - a_against_u;
}

}  // namespace heisenkit
