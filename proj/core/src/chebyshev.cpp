#include "heisenkit/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

#include "heisenkit/gauss.hpp"
#include "heisenkit/parallel.hpp"

namespace heisenkit {

Cheb3 Cheb3::fit(const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                 const std::array<int, 3>& order,
                 const std::function<double(double, double, double)>& f) {
  Cheb3 c;
  c.lo_ = lo;
  c.hi_ = hi;
  c.n_ = order;
  const int n0 = order[0], n1 = order[1], n2 = order[2];
  if (n0 < 2 || n1 < 2 || n2 < 2) throw std::invalid_argument("Cheb3::fit: order too small");
  const auto p0 = chebyshev_points(n0);
  const auto p1 = chebyshev_points(n1);
  const auto p2 = chebyshev_points(n2);
  auto map = [](double u, double a, double b) { return 0.5 * (a + b) + 0.5 * (b - a) * u; };
  c.coef_.assign(static_cast<std::size_t>(n0) * n1 * n2, 0.0);
  parallel_for(static_cast<std::size_t>(n0) * n1, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n1;
    const int j = static_cast<int>(idx) % n1;
    const double x0 = map(p0[i], lo[0], hi[0]);
    const double x1 = map(p1[j], lo[1], hi[1]);
    double* slot = c.coef_.data() + (static_cast<std::size_t>(i) * n1 + j) * n2;
    for (int k = 0; k < n2; ++k) slot[k] = f(x0, x1, map(p2[k], lo[2], hi[2]));
  });
  // transform each dimension in turn
  {
    // dim 2 (contiguous)
    std::vector<double> out(n2), line(n2);
    for (int b = 0; b < n0 * n1; ++b) {
      double* base = c.coef_.data() + static_cast<std::size_t>(b) * n2;
      for (int m = 0; m < n2; ++m) line[m] = base[m];
      for (int j = 0; j < n2; ++j) {
        double s = 0.0;
        for (int m = 0; m < n2; ++m) s += line[m] * std::cos(j * M_PI * (m + 0.5) / n2);
        base[j] = s * (j == 0 ? 1.0 : 2.0) / n2;
      }
    }
    // dim 1
    std::vector<double> l1(n1);
    for (int i = 0; i < n0; ++i)
      for (int k = 0; k < n2; ++k) {
        double* base = c.coef_.data() + (static_cast<std::size_t>(i) * n1) * n2 + k;
        for (int m = 0; m < n1; ++m) l1[m] = base[static_cast<std::size_t>(m) * n2];
        for (int j = 0; j < n1; ++j) {
          double s = 0.0;
          for (int m = 0; m < n1; ++m) s += l1[m] * std::cos(j * M_PI * (m + 0.5) / n1);
          base[static_cast<std::size_t>(j) * n2] = s * (j == 0 ? 1.0 : 2.0) / n1;
        }
      }
    // dim 0
    std::vector<double> l0(n0);
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        double* base = c.coef_.data() + static_cast<std::size_t>(j) * n2 + k;
        const std::size_t stride = static_cast<std::size_t>(n1) * n2;
        for (int m = 0; m < n0; ++m) l0[m] = base[m * stride];
        for (int q = 0; q < n0; ++q) {
          double s = 0.0;
          for (int m = 0; m < n0; ++m) s += l0[m] * std::cos(q * M_PI * (m + 0.5) / n0);
          base[q * stride] = s * (q == 0 ? 1.0 : 2.0) / n0;
        }
      }
  }
  return c;
}

bool Cheb3::covers(double x0, double x1, double x2) const {
  return x0 >= lo_[0] && x0 <= hi_[0] && x1 >= lo_[1] && x1 <= hi_[1] && x2 >= lo_[2] &&
         x2 <= hi_[2];
}

double Cheb3::eval(double x0, double x1, double x2) const {
  const int n0 = n_[0], n1 = n_[1], n2 = n_[2];
  auto unit = [](double x, double a, double b) { return (2.0 * x - a - b) / (b - a); };
  const double u0 = unit(x0, lo_[0], hi_[0]);
  const double u1 = unit(x1, lo_[1], hi_[1]);
  const double u2 = unit(x2, lo_[2], hi_[2]);
  // Chebyshev values by recurrence
  thread_local std::vector<double> T0, T1, T2;
  auto fill = [](std::vector<double>& T, double u, int n) {
    T.resize(n);
    T[0] = 1.0;
    if (n > 1) T[1] = u;
    for (int k = 2; k < n; ++k) T[k] = 2.0 * u * T[k - 1] - T[k - 2];
  };
  fill(T0, u0, n0);
  fill(T1, u1, n1);
  fill(T2, u2, n2);
  double acc = 0.0;
  const double* c = coef_.data();
  for (int i = 0; i < n0; ++i) {
    double acc1 = 0.0;
    for (int j = 0; j < n1; ++j) {
      double acc2 = 0.0;
      for (int k = 0; k < n2; ++k) acc2 += c[k] * T2[k];
      acc1 += acc2 * T1[j];
      c += n2;
    }
    acc += acc1 * T0[i];
  }
  return acc;
}

}  // namespace heisenkit
