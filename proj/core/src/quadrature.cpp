#include "heisenkit/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "heisenkit/gauss.hpp"

namespace heisenkit {

double WeightedMesh::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

struct VE {
  double v = 0.0;
  double e = 0.0;
};

struct Interval {
  double lo, hi;
};

// Exact t-fiber of (annulus r1<=rho<r2)
// intersected with {rho(xi.v) < dm}: both constraints are quadratic in t.
int fiber_intervals(const FiberRegion& reg, const std::vector<double>& x,
                    std::array<Interval, 4>& out) {
  double s2 = 0.0;
  for (double v : x) s2 += v * v;
  const double t2sq = reg.r2 * reg.r2 * reg.r2 * reg.r2 - s2 * s2;
  if (t2sq <= 0.0) return 0;
  const double T2 = std::sqrt(t2sq);
  std::array<Interval, 2> base;
  int nbase = 0;
  double t1sq = -1.0;
  if (reg.r1 > 0.0) t1sq = reg.r1 * reg.r1 * reg.r1 * reg.r1 - s2 * s2;
  if (t1sq > 0.0) {
    const double T1 = std::sqrt(t1sq);
    base[nbase++] = {-T2, -T1};
    base[nbase++] = {T1, T2};
  } else {
    base[nbase++] = {-T2, T2};
  }
  int count = 0;
  if (!reg.has_mask) {
    for (int i = 0; i < nbase; ++i)
      if (base[i].hi > base[i].lo) out[count++] = base[i];
    return count;
  }
  // rho(xi.v)^4 = |x_xi + x|^4 + (t_xi + t + x_xi^T J x)^2 < dm^4
  double shift2 = 0.0;
  const std::size_t m = x.size();
  const std::size_t half = m / 2;
  double pair = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = reg.mask_x[i] + x[i];
    shift2 += s * s;
  }
  for (std::size_t i = 0; i < half; ++i)
    pair += reg.mask_x[i + half] * x[i] - reg.mask_x[i] * x[i + half];
  const double c = reg.mask_t + 2.0 * pair;
  const double d4 = reg.mask_delta * reg.mask_delta * reg.mask_delta * reg.mask_delta;
  const double ssq = d4 - shift2 * shift2;
  if (ssq <= 0.0) return 0;
  const double S = std::sqrt(ssq);
  const Interval mask{-c - S, -c + S};
  for (int i = 0; i < nbase; ++i) {
    const double lo = std::max(base[i].lo, mask.lo);
    const double hi = std::min(base[i].hi, mask.hi);
    if (hi > lo) out[count++] = {lo, hi};
  }
  return count;
}

class Adaptive1D {
 public:
  Adaptive1D(double rtol, int order, int max_depth)
      : rtol_(rtol), order_(order), max_depth_(max_depth), rule_(gauss_legendre(order)) {}

  VE integrate(const std::function<VE(double)>& g, double a, double b,
               const std::vector<double>& breaks) const {
    std::vector<double> edges;
    edges.push_back(a);
    for (double p : breaks)
      if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    VE total;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      double l1 = 0.0;
      const VE parent = panel(g, edges[i], edges[i + 1], l1);
      const VE part = refine(g, edges[i], edges[i + 1], parent, max_depth_);
      total.v += part.v;
      total.e += part.e;
    }
    return total;
  }

 private:
  VE panel(const std::function<VE(double)>& g, double a, double b, double& l1) const {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    VE out;
    l1 = 0.0;
    for (int k = 0; k < order_; ++k) {
      const VE gv = g(mid + h * rule_.nodes[k]);
      out.v += rule_.weights[k] * gv.v;
      out.e += rule_.weights[k] * gv.e;
      l1 += rule_.weights[k] * std::abs(gv.v);
    }
    out.v *= h;
    out.e *= h;
    l1 *= h;
    return out;
  }

  VE refine(const std::function<VE(double)>& g, double a, double b, const VE& parent,
            int depth) const {
    const double mid = 0.5 * (a + b);
    double l1l = 0.0, l1r = 0.0;
    const VE left = panel(g, a, mid, l1l);
    const VE right = panel(g, mid, b, l1r);
    const double v1 = left.v + right.v;
    const double diff = std::abs(v1 - parent.v);
    const double scale = std::max(std::abs(v1), 0.05 * (l1l + l1r));
    if (depth <= 0 || diff <= rtol_ * scale) {
      return {v1, left.e + right.e + diff};
    }
    const VE rl = refine(g, a, mid, left, depth - 1);
    const VE rr = refine(g, mid, b, right, depth - 1);
    return {rl.v + rr.v, rl.e + rr.e};
  }

  double rtol_;
  int order_;
  int max_depth_;
  const GaussRule& rule_;
};

// Nested adaptive integration: `bounds` yields the interval and interior
// breakpoints of level j given the outer coordinates, `leaf` evaluates the
// innermost integrand.
struct NestedSpec {
  int dims;
  std::function<bool(int, const std::vector<double>&, double&, double&, std::vector<double>&)> bounds;
  std::function<VE(const std::vector<double>&)> leaf;
  double rtol;
  int order;
  int max_depth;
};

class NestedIntegrator {
 public:
  explicit NestedIntegrator(const NestedSpec& spec)
      : spec_(spec), ad_(spec.rtol, spec.order, spec.max_depth), prefix_(spec.dims, 0.0) {}

  VE run() { return level(0); }

 private:
  VE level(int j) {
    double lo, hi;
    std::vector<double> breaks;
    if (!spec_.bounds(j, prefix_, lo, hi, breaks)) return {};
    if (!(hi > lo)) return {};
    auto g = [this, j](double x) -> VE {
      prefix_[j] = x;
      if (j + 1 == spec_.dims) return spec_.leaf(prefix_);
      return level(j + 1);
    };
    return ad_.integrate(g, lo, hi, breaks);
  }

  const NestedSpec& spec_;
  Adaptive1D ad_;
  std::vector<double> prefix_;
};

// Adaptive integral over a fiber region: the 2n x-levels nest adaptively,
// the t-fiber is exact and integrated per interval.
VE integrate_region(const ScalarField& f, int n, const FiberRegion& reg, const QuadSpec& spec,
                    long long& evals) {
  const int xdim = 2 * n;
  Adaptive1D tline(spec.relative_tolerance, spec.points_per_axis + 2, spec.max_subdivisions);
  NestedSpec ns;
  ns.dims = xdim;
  ns.rtol = spec.relative_tolerance;
  ns.order = spec.points_per_axis;
  ns.max_depth = spec.max_subdivisions;
  ns.bounds = [&reg, xdim](int j, const std::vector<double>& prefix, double& lo, double& hi,
                           std::vector<double>& breaks) {
    double used = 0.0;
    for (int i = 0; i < j; ++i) used += prefix[i] * prefix[i];
    const double rem = reg.r2 * reg.r2 - used;
    if (rem <= 0.0) return false;
    hi = std::sqrt(rem);
    lo = -hi;
    if (reg.r1 > 0.0) {
      const double ip = reg.r1 * reg.r1 - used;
      if (ip > 0.0) {
        const double p = std::sqrt(ip);
        breaks.push_back(-p);
        breaks.push_back(p);
      }
    }
    if (reg.has_mask && j == xdim - 1) {
      double sh = 0.0;
      for (int i = 0; i < j; ++i) {
        const double s = reg.mask_x[i] + prefix[i];
        sh += s * s;
      }
      const double c2 = reg.mask_delta * reg.mask_delta - sh;
      if (c2 > 0.0) {
        const double root = std::sqrt(c2);
        breaks.push_back(-reg.mask_x[j] - root);
        breaks.push_back(-reg.mask_x[j] + root);
      }
    }
    return true;
  };
  ns.leaf = [&](const std::vector<double>& xs) -> VE {
    std::array<Interval, 4> ivs;
    const int count = fiber_intervals(reg, xs, ivs);
    VE out;
    HPoint z;
    z.x = xs;
    for (int i = 0; i < count; ++i) {
      auto g = [&](double t) -> VE {
        z.t = t;
        ++evals;
        return {f(z), 0.0};
      };
      const VE part = tline.integrate(g, ivs[i].lo, ivs[i].hi, {});
      out.v += part.v;
      out.e += part.e;
    }
    return out;
  };
  NestedIntegrator ni(ns);
  return ni.run();
}

double pow_int(double base, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

QuadResult integrate_box(const ScalarField& f, const std::vector<double>& lo,
                         const std::vector<double>& hi, const QuadSpec& spec) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("integrate_box: bad bounds");
  const int dims = static_cast<int>(lo.size());
  long long evals = 0;
  NestedSpec ns;
  ns.dims = dims;
  ns.rtol = spec.relative_tolerance;
  ns.order = spec.points_per_axis;
  ns.max_depth = spec.max_subdivisions;
  ns.bounds = [&lo, &hi](int j, const std::vector<double>&, double& a, double& b,
                         std::vector<double>&) {
    a = lo[j];
    b = hi[j];
    return true;
  };
  ns.leaf = [&](const std::vector<double>& coords) -> VE {
    HPoint z;
    z.x.assign(coords.begin(), coords.end() - 1);
    z.t = coords.back();
    ++evals;
    return {f(z), 0.0};
  };
  NestedIntegrator ni(ns);
  const VE out = ni.run();
  return {out.v, out.e, evals};
}

QuadResult integrate_ball(const ScalarField& f, const KoranyiBall& ball, const QuadSpec& spec) {
  if (!(ball.radius > 0.0)) throw std::invalid_argument("integrate_ball: radius must be positive");
  const int n = static_cast<int>(ball.center.x_dim()) / 2;
  const HPoint c = ball.center;
  auto g = [&f, &c](const HPoint& v) { return f(mul(c, v)); };
  FiberRegion reg;
  reg.r1 = 0.0;
  reg.r2 = ball.radius;
  long long evals = 0;
  const VE out = integrate_region(g, n, reg, spec, evals);
  return {out.v, out.e, evals};
}

QuadResult integrate_singular(const ScalarField& f, double beta, const KoranyiBall& ball,
                              const HPoint& singular_point, const QuadSpec& spec) {
  const int n = static_cast<int>(ball.center.x_dim()) / 2;
  const int Q = 2 * n + 2;
  if (beta < 0.0) throw std::invalid_argument("integrate_singular: beta must be >= 0");
  if (beta >= Q) throw std::domain_error("integrate_singular: beta >= Q is not locally integrable");
  if (beta == 0.0) return integrate_ball(f, ball, spec);

  const HPoint z = singular_point;
  const HPoint xi = mul(inv(ball.center), z);  // ball mask in the frame at z
  const double dist = gauge(xi);
  const double delta = ball.radius;
  const double eps = spec.inner_cutoff > 0.0 ? spec.inner_cutoff : delta * 1e-3;
  const double ratio = spec.shell_ratio > 1.0 ? spec.shell_ratio : 2.0;
  const double r_out = dist + delta;

  // Singularity well outside the closed ball: nothing singular in range.
  if (dist >= delta + eps) {
    auto g = [&](const HPoint& w) {
      return f(w) * std::pow(gauge_distance(w, z), -beta);
    };
    return integrate_ball(g, ball, spec);
  }

  auto g = [&](const HPoint& v) {  // v in the frame at z
    return f(mul(z, v)) * std::pow(gauge(v), -beta);
  };
  FiberRegion reg;
  reg.has_mask = true;
  reg.mask_x = xi.x;
  reg.mask_t = xi.t;
  reg.mask_delta = delta;

  QuadResult out;
  double r_lo = eps;
  while (r_lo < r_out) {
    const double r_hi = std::min(r_lo * ratio, r_out);
    if (r_hi > std::max(0.0, dist - delta)) {  // shells fully outside the mask are empty
      reg.r1 = r_lo;
      reg.r2 = r_hi;
      long long evals = 0;
      const VE part = integrate_region(g, n, reg, spec, evals);
      out.value += part.v;
      out.error_estimate += part.e;
      out.evaluations += evals;
    }
    r_lo = r_hi;
  }

  // Analytic bound for the omitted core: sup|f| * int_{rho<eps} rho^{-beta}.
  double fmax = 0.0;
  for (const HPoint& s : gauge_sphere_samples(n, eps * 1.25, 16)) {
    const HPoint w = mul(z, s);
    if (gauge_distance(ball.center, w) < delta) fmax = std::max(fmax, std::abs(f(w)));
  }
  out.error_estimate +=
      1.5 * fmax * unit_ball_volume(n) * Q / (Q - beta) * std::pow(eps, Q - beta);
  return out;
}

QuadResult integrate_fullspace(const ScalarField& f, int n, const QuadSpec& spec) {
  const int Q = 2 * n + 2;
  const double gamma = spec.tail_exponent;
  if (!(gamma > Q))
    throw std::domain_error("integrate_fullspace: tail_exponent must exceed Q");

  auto tail_bound = [&](double R) {
    double c = spec.tail_constant;
    if (c < 0.0) {
      double m = 0.0;
      for (double s : {1.0, 1.5, 2.0})
        for (const HPoint& p : gauge_sphere_samples(n, R * s, 16))
          m = std::max(m, std::abs(f(p)) * std::pow(gauge(p), gamma));
      c = 2.0 * m;
    }
    return c * unit_ball_volume(n) * Q / (gamma - Q) * std::pow(R, Q - gamma);
  };

  QuadResult out;
  FiberRegion reg;
  double r_hi = 1.0;
  double r_lo = 0.0;
  const bool fixed_R = spec.outer_cutoff > 0.0;
  const double r_cap = fixed_R ? spec.outer_cutoff : 1024.0;
  for (;;) {
    reg.r1 = r_lo;
    reg.r2 = std::min(r_hi, r_cap);
    long long evals = 0;
    const VE part = integrate_region(f, n, reg, spec, evals);
    out.value += part.v;
    out.error_estimate += part.e;
    out.evaluations += evals;
    r_lo = reg.r2;
    if (r_lo >= r_cap) break;
    if (!fixed_R && r_lo >= 8.0) {
      const double tb = tail_bound(r_lo);
      if (tb <= 0.1 * spec.relative_tolerance * std::abs(out.value)) break;
    }
    r_hi *= 2.0;
  }
  out.error_estimate += tail_bound(r_lo);
  return out;
}

double unit_ball_volume(int n) {
  static std::map<int, double> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadSpec spec;
  spec.relative_tolerance = n == 1 ? 1e-10 : 1e-6;
  spec.points_per_axis = 10;
  spec.max_subdivisions = n == 1 ? 26 : 14;
  KoranyiBall B{identity(n), 1.0};
  const QuadResult r = integrate_ball([](const HPoint&) { return 1.0; }, B, spec);
  cache[n] = r.value;
  return r.value;
}

GroupContext make_group_context(int n) {
  GroupContext ctx;
  ctx.n = n;
  ctx.unit_ball_volume = unit_ball_volume(n);
  return ctx;
}

WeightedMesh build_region_mesh(int n, const FiberRegion& reg, const MeshSpec& ms) {
  const int xdim = 2 * n;
  const GaussRule& xrule = gauss_legendre(ms.x_order);
  const GaussRule& trule = gauss_legendre(ms.t_order);
  WeightedMesh mesh;

  auto level_edges = [&](double R, const std::vector<double>& extra) {
    std::vector<double> edges;
    if (ms.grade_levels <= 0) {
      for (int i = 0; i <= ms.x_panels; ++i) edges.push_back(-R + 2.0 * R * i / ms.x_panels);
    } else {
      const double core = R * 0.5;
      for (int i = 0; i <= ms.x_panels; ++i) edges.push_back(-core + 2.0 * core * i / ms.x_panels);
      double w = core;
      for (int k = 1; k <= ms.grade_levels; ++k) {
        w = 0.5 * (w + R);  // R(1 - 2^{-k-1}) marching toward the edge
        edges.push_back(w);
        edges.push_back(-w);
      }
      edges.push_back(R);
      edges.push_back(-R);
    }
    for (double p : extra)
      if (p > -R && p < R) edges.push_back(p);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                edges.end());
    return edges;
  };

  std::vector<double> xs(xdim, 0.0);
  std::function<void(int, double)> rec = [&](int j, double wpre) {
    double used = 0.0;
    for (int i = 0; i < j; ++i) used += xs[i] * xs[i];
    const double rem = reg.r2 * reg.r2 - used;
    if (rem <= 0.0) return;
    const double R = std::sqrt(rem);
    std::vector<double> extra;
    if (reg.r1 > 0.0) {
      const double ip = reg.r1 * reg.r1 - used;
      if (ip > 0.0) {
        extra.push_back(-std::sqrt(ip));
        extra.push_back(std::sqrt(ip));
      }
    }
    if (reg.has_mask && j == xdim - 1) {
      double sh = 0.0;
      for (int i = 0; i < j; ++i) {
        const double s = reg.mask_x[i] + xs[i];
        sh += s * s;
      }
      const double c2 = reg.mask_delta * reg.mask_delta - sh;
      if (c2 > 0.0) {
        extra.push_back(-reg.mask_x[j] - std::sqrt(c2));
        extra.push_back(-reg.mask_x[j] + std::sqrt(c2));
      }
    }
    const auto edges = level_edges(R, extra);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double h = 0.5 * (edges[p + 1] - edges[p]);
      const double mid = 0.5 * (edges[p + 1] + edges[p]);
      for (int k = 0; k < ms.x_order; ++k) {
        xs[j] = mid + h * xrule.nodes[k];
        const double w = wpre * h * xrule.weights[k];
        if (j + 1 < xdim) {
          rec(j + 1, w);
          continue;
        }
        std::array<Interval, 4> ivs;
        const int count = fiber_intervals(reg, xs, ivs);
        for (int i = 0; i < count; ++i) {
          const double th = 0.5 * (ivs[i].hi - ivs[i].lo);
          const double tm = 0.5 * (ivs[i].hi + ivs[i].lo);
          for (int q = 0; q < ms.t_order; ++q) {
            mesh.nodes.emplace_back(xs, tm + th * trule.nodes[q]);
            mesh.weights.push_back(w * th * trule.weights[q]);
          }
        }
      }
    }
    xs[j] = 0.0;
  };
  rec(0, 1.0);
  return mesh;
}

WeightedMesh dilated_mesh(const WeightedMesh& mesh, double s, int Q) {
  WeightedMesh out;
  out.nodes.reserve(mesh.nodes.size());
  out.weights.reserve(mesh.weights.size());
  const double wfac = pow_int(s, Q);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    out.nodes.push_back(dilate(s, mesh.nodes[i]));
    out.weights.push_back(mesh.weights[i] * wfac);
  }
  return out;
}

WeightedMesh translated_mesh(const WeightedMesh& mesh, const HPoint& g) {
  WeightedMesh out;
  out.nodes.reserve(mesh.nodes.size());
  out.weights = mesh.weights;
  for (const auto& p : mesh.nodes) out.nodes.push_back(mul(g, p));
  return out;
}

std::vector<HPoint> gauge_sphere_samples(int n, double r, int count) {
  // x = r sqrt(cos tau) w, t = r^2 sin tau lies exactly on {rho = r}.
  std::vector<HPoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double tau = -M_PI / 2.0 + M_PI * (((7 * k) % count) + 0.5) / count;
    const double theta = 2.0 * M_PI * k / count;
    std::vector<double> w(2 * static_cast<std::size_t>(n), 0.0);
    double norm = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
      w[i] = (i % 2 == 0) ? std::cos((i / 2 + 1.0) * theta) : std::sin((i / 2 + 1.0) * theta);
      norm += w[i] * w[i];
    }
    norm = std::sqrt(norm);
    const double xr = r * std::sqrt(std::max(0.0, std::cos(tau)));
    for (auto& v : w) v *= xr / norm;
    out.emplace_back(std::move(w), r * r * std::sin(tau));
  }
  return out;
}

}  // namespace heisenkit
