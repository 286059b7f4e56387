#include "heisenkit/group.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenkit {

std::vector<double> GroupContext::j_matrix() const {
  const int m = 2 * n;
  std::vector<double> J(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < n; ++i) {
    J[static_cast<std::size_t>(i) * m + (i + n)] = -2.0;
    J[static_cast<std::size_t>(i + n) * m + i] = 2.0;
  }
  return J;
}

double symplectic_pairing(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() % 2 != 0)
    throw std::invalid_argument("symplectic_pairing: dimension mismatch");
  const std::size_t n = x.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i + n] * y[i] - x[i] * y[i + n];
  return 2.0 * s;
}

HPoint identity(int n) { return HPoint(std::vector<double>(2 * static_cast<std::size_t>(n), 0.0), 0.0); }

HPoint mul(const HPoint& z, const HPoint& w) {
  if (z.x_dim() != w.x_dim()) throw std::invalid_argument("mul: dimension mismatch");
  HPoint out;
  out.x.resize(z.x_dim());
  for (std::size_t i = 0; i < z.x_dim(); ++i) out.x[i] = z.x[i] + w.x[i];
  out.t = z.t + w.t + symplectic_pairing(z.x, w.x);
  return out;
}

HPoint inv(const HPoint& z) {
  HPoint out = z;
  for (auto& v : out.x) v = -v;
  out.t = -out.t;
  return out;
}

HPoint dilate(double r, const HPoint& z) {
  if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
  HPoint out = z;
  for (auto& v : out.x) v *= r;
  out.t *= r * r;
  return out;
}

double gauge4(const HPoint& z) {
  double s = 0.0;
  for (double v : z.x) s += v * v;
  return s * s + z.t * z.t;
}

double gauge(const HPoint& z) { return std::pow(gauge4(z), 0.25); }

double gauge_distance(const HPoint& z, const HPoint& w) { return gauge(mul(inv(z), w)); }

bool contains(const KoranyiBall& ball, const HPoint& z) {
  return gauge_distance(ball.center, z) < ball.radius;
}

double ball_volume(const GroupContext& ctx, const KoranyiBall& ball) {
  if (!(ball.radius > 0.0)) throw std::invalid_argument("ball_volume: radius must be positive");
  if (std::isnan(ctx.unit_ball_volume))
    throw std::logic_error("ball_volume: unit ball volume not computed; use make_group_context");
  return ctx.unit_ball_volume * std::pow(ball.radius, ctx.homogeneous_dim());
}

}  // namespace heisenkit
