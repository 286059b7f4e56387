#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heisenkit/group.hpp"

namespace heisenkit {

/// Schwartz-class test function with hand-coded partial derivatives and
/// sub-Laplacian.  The invariant fields are assembled from the partials:
///   X_i = d/dx_i + 2 x_{i+n} d/dt,  X_{i+n} = d/dx_{i+n} - 2 x_i d/dt,
/// and the right-invariant family flips the d/dt coefficients.
struct TestFunction {
  std::string id;
  std::function<double(const HPoint&)> value;
  std::function<double(int, const HPoint&)> dx;  // d/dx_i, 0-based
  std::function<double(const HPoint&)> dt;       // d/dt
  std::function<double(const HPoint&)> lap;      // L u

  double left_field(int i, const HPoint& z) const;
  double right_field(int i, const HPoint& z) const;

  /// u(s^{-1} z) -- the dilated approximate-identity profile phi_s
  /// is handled by callers via value(dilate(1/s, z)) * s^{-Q}.
};

/// exp(-a |x|^2 - b t^2).
TestFunction radial_gaussian(int n, double a, double b);
/// (1 + |x|^2) exp(-|x|^2 - t^2).
TestFunction poly_radial_gaussian(int n);
/// t exp(-|x|^2 - 2 t^2).
TestFunction odd_gaussian(int n);
/// Gaussian bump with unit Haar integral (exact normalizer pi^{n+1/2}).
TestFunction normalized_bump(int n);
/// u(g^{-1} z) with derivatives transported through the group chain rule.
TestFunction translate(const TestFunction& u, const HPoint& g);

std::vector<TestFunction> standard_test_functions(int n);

}  // namespace heisenkit
