#include "heisenkit/test_function.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace heisenkit {

double TestFunction::left_field(int i, const HPoint& z) const {
  const int n = static_cast<int>(z.x_dim()) / 2;
  if (i == 2 * n) return dt(z);
  if (i < n) return dx(i, z) + 2.0 * z.x[i + n] * dt(z);
  return dx(i, z) - 2.0 * z.x[i - n] * dt(z);
}

double TestFunction::right_field(int i, const HPoint& z) const {
  const int n = static_cast<int>(z.x_dim()) / 2;
  if (i == 2 * n) return dt(z);
  if (i < n) return dx(i, z) - 2.0 * z.x[i + n] * dt(z);
  return dx(i, z) + 2.0 * z.x[i - n] * dt(z);
}

namespace {

// Profiles F(s, t) with s = |x|^2.  For such functions
//   d/dx_i u = 2 x_i F_s,  d/dt u = F_t,
//   L u = -(4 n F_s + 4 s (F_ss + F_tt)).
struct RadialProfile {
  std::function<double(double, double)> F, Fs, Ft, Fss, Ftt;
};

TestFunction from_profile(std::string id, int n, RadialProfile pr) {
  auto p = std::make_shared<RadialProfile>(std::move(pr));
  TestFunction u;
  u.id = std::move(id);
  u.value = [p](const HPoint& z) {
    double s = 0.0;
    for (double v : z.x) s += v * v;
    return p->F(s, z.t);
  };
  u.dx = [p](int i, const HPoint& z) {
    double s = 0.0;
    for (double v : z.x) s += v * v;
    return 2.0 * z.x[i] * p->Fs(s, z.t);
  };
  u.dt = [p](const HPoint& z) {
    double s = 0.0;
    for (double v : z.x) s += v * v;
    return p->Ft(s, z.t);
  };
  u.lap = [p, n](const HPoint& z) {
    double s = 0.0;
    for (double v : z.x) s += v * v;
    return -(4.0 * n * p->Fs(s, z.t) + 4.0 * s * (p->Fss(s, z.t) + p->Ftt(s, z.t)));
  };
  return u;
}

}  // namespace

TestFunction radial_gaussian(int n, double a, double b) {
  RadialProfile pr;
  pr.F = [a, b](double s, double t) { return std::exp(-a * s - b * t * t); };
  pr.Fs = [a, b](double s, double t) { return -a * std::exp(-a * s - b * t * t); };
  pr.Ft = [a, b](double s, double t) { return -2.0 * b * t * std::exp(-a * s - b * t * t); };
  pr.Fss = [a, b](double s, double t) { return a * a * std::exp(-a * s - b * t * t); };
  pr.Ftt = [a, b](double s, double t) {
    return (4.0 * b * b * t * t - 2.0 * b) * std::exp(-a * s - b * t * t);
  };
  return from_profile("gaussian", n, std::move(pr));
}

TestFunction poly_radial_gaussian(int n) {
  RadialProfile pr;
  auto e = [](double s, double t) { return std::exp(-s - t * t); };
  pr.F = [e](double s, double t) { return (1.0 + s) * e(s, t); };
  pr.Fs = [e](double s, double t) { return -s * e(s, t); };
  pr.Ft = [e](double s, double t) { return -2.0 * t * (1.0 + s) * e(s, t); };
  pr.Fss = [e](double s, double t) { return (s - 1.0) * e(s, t); };
  pr.Ftt = [e](double s, double t) { return (1.0 + s) * (4.0 * t * t - 2.0) * e(s, t); };
  TestFunction u = from_profile("poly_gaussian", n, std::move(pr));
  return u;
}

TestFunction odd_gaussian(int n) {
  RadialProfile pr;
  auto e = [](double s, double t) { return std::exp(-s - 2.0 * t * t); };
  pr.F = [e](double s, double t) { return t * e(s, t); };
  pr.Fs = [e](double s, double t) { return -t * e(s, t); };
  pr.Ft = [e](double s, double t) { return (1.0 - 4.0 * t * t) * e(s, t); };
  pr.Fss = [e](double s, double t) { return t * e(s, t); };
  pr.Ftt = [e](double s, double t) { return (16.0 * t * t * t - 12.0 * t) * e(s, t); };
  TestFunction u = from_profile("odd_gaussian", n, std::move(pr));
  return u;
}

TestFunction normalized_bump(int n) {
  TestFunction u = radial_gaussian(n, 1.0, 1.0);
  const double norm = std::pow(M_PI, n + 0.5);
  auto scale = [norm](TestFunction& f) {
    auto v = f.value;
    auto dxf = f.dx;
    auto dtf = f.dt;
    auto lp = f.lap;
    f.value = [v, norm](const HPoint& z) { return v(z) / norm; };
    f.dx = [dxf, norm](int i, const HPoint& z) { return dxf(i, z) / norm; };
    f.dt = [dtf, norm](const HPoint& z) { return dtf(z) / norm; };
    f.lap = [lp, norm](const HPoint& z) { return lp(z) / norm; };
  };
  scale(u);
  u.id = "normalized_bump";
  return u;
}

TestFunction translate(const TestFunction& u, const HPoint& g) {
  const int n = static_cast<int>(g.x_dim()) / 2;
  const HPoint ginv = inv(g);
  TestFunction v;
  v.id = u.id + "_translated";
  v.value = [u, ginv](const HPoint& z) { return u.value(mul(ginv, z)); };
  // w = g^{-1} z: x_w = x_z - x_g and t_w picks up the symplectic cross term,
  // so d/dx_{z,i} = d/dx_{w,i} + kappa_i d/dt with kappa from J.
  v.dx = [u, ginv, g, n](int i, const HPoint& z) {
    const HPoint w = mul(ginv, z);
    const double kappa = (i < n) ? -2.0 * g.x[i + n] : 2.0 * g.x[i - n];
    return u.dx(i, w) + kappa * u.dt(w);
  };
  v.dt = [u, ginv](const HPoint& z) { return u.dt(mul(ginv, z)); };
  v.lap = [u, ginv](const HPoint& z) { return u.lap(mul(ginv, z)); };
  return v;
}

std::vector<TestFunction> standard_test_functions(int n) {
  return {radial_gaussian(n, 1.0, 1.0), poly_radial_gaussian(n), odd_gaussian(n)};
}

}  // namespace heisenkit
