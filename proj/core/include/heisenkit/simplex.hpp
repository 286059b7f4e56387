#pragma once

#include <functional>
#include <vector>

namespace heisenkit {

struct SimplexOptions {
  int max_iterations = 400;
  double f_tolerance = 1e-7;  // relative spread of simplex values
  double x_tolerance = 1e-9;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex; deterministic given the starting point
/// and step sizes.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& steps,
                          const SimplexOptions& opts = {});

}  // namespace heisenkit
