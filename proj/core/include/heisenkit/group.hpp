#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace heisenkit {

/// A point (x, t) of the Heisenberg group H^n = R^{2n} x R.
struct HPoint {
  std::vector<double> x;  // length 2n
  double t = 0.0;

  HPoint() = default;
  HPoint(std::vector<double> x_, double t_) : x(std::move(x_)), t(t_) {}

  std::size_t x_dim() const { return x.size(); }
};

/// Per-dimension constants of H^n.  n is the data; the homogeneous
/// dimension is Q = 2n+2 and the topological dimension 2n+1.  The
/// unit gauge-ball volume is filled in by make_group_context (it takes
/// a quadrature); plain GroupContext{n} leaves it NaN.
/// Immutable after construction, safe to share across threads.
struct GroupContext {
  int n = 1;
  double unit_ball_volume = std::numeric_limits<double>::quiet_NaN();

  int x_dim() const { return 2 * n; }
  int topological_dim() const { return 2 * n + 1; }
  int homogeneous_dim() const { return 2 * n + 2; }

  /// The 2n x 2n matrix 2 [[0, -I_n], [I_n, 0]], row-major.
  std::vector<double> j_matrix() const;
};

/// x^T J y, the symplectic pairing entering the group law.
double symplectic_pairing(const std::vector<double>& x, const std::vector<double>& y);

HPoint identity(int n);

/// Group law (x,t).(y,s) = (x+y, t+s+x^T J y).  Throws on dimension mismatch.
HPoint mul(const HPoint& z, const HPoint& w);

/// (x,t)^{-1} = (-x,-t).
HPoint inv(const HPoint& z);

/// r.(x,t) = (r x, r^2 t), r > 0.  Throws if r <= 0.
HPoint dilate(double r, const HPoint& z);

/// Koranyi norm rho(x,t) = (|x|^4 + t^2)^{1/4}.
double gauge(const HPoint& z);

/// rho^4 = |x|^4 + t^2; smooth at the origin, cheaper when only level sets matter.
double gauge4(const HPoint& z);

/// Gauge distance rho(z^{-1} w).
double gauge_distance(const HPoint& z, const HPoint& w);

struct KoranyiBall {
  HPoint center;
  double radius = 1.0;
};

bool contains(const KoranyiBall& ball, const HPoint& z);

/// |B(z0, delta)| = |B(e,1)| delta^Q.  Requires ctx.unit_ball_volume set.
double ball_volume(const GroupContext& ctx, const KoranyiBall& ball);

}  // namespace heisenkit
