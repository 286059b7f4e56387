#pragma once

#include <array>
#include <functional>
#include <vector>

namespace heisenkit {

/// Tensor Chebyshev model on a 3-box (used as the near-field surrogate of
/// potential fields for n = 1; validated against direct quadrature in tests).
class Cheb3 {
 public:
  static Cheb3 fit(const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                   const std::array<int, 3>& order,
                   const std::function<double(double, double, double)>& f);

  double eval(double x0, double x1, double x2) const;
  bool covers(double x0, double x1, double x2) const;
  bool empty() const { return coef_.empty(); }

 private:
  std::array<double, 3> lo_{}, hi_{};
  std::array<int, 3> n_{};
  std::vector<double> coef_;  // [i0][i1][i2] flattened
};

}  // namespace heisenkit
