#pragma once

#include <vector>

namespace heisenkit {

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule of the given order (cached, thread-safe).
const GaussRule& gauss_legendre(int order);

/// Chebyshev points of the first kind mapped to (-1,1), cos(pi (m+1/2)/count).
std::vector<double> chebyshev_points(int count);

}  // namespace heisenkit
